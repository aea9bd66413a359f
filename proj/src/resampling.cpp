#include "priceidx/resampling.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <utility>

#include "priceidx/csv_io.hpp"
#include "priceidx/geks.hpp"
#include "priceidx/parallel.hpp"
#include "priceidx/rng.hpp"
#include "priceidx/variance.hpp"

namespace priceidx {

namespace {

double log_statistic(const ComparisonDataset& dataset, const BootstrapStatistic& statistic) {
    if (statistic.method == IndexMethod::Geks) {
        const GeksResult geks = geks_indexes(dataset, statistic.base);
        return geks.log_index_of(statistic.target);
    }
    const BilateralView view = dataset.bilateral_view(statistic.target, statistic.base);
    return bilateral_index(view, statistic.method, statistic.options).log_value;
}

double analytic_se_log(const ComparisonDataset& dataset, const BootstrapStatistic& statistic) {
    if (statistic.method == IndexMethod::Geks) {
        const GeksResult geks = geks_with_variance(dataset, statistic.base);
        return std::sqrt(geks.var_log_of(statistic.target).value());
    }
    const BilateralView view = dataset.bilateral_view(statistic.target, statistic.base);
    return std::sqrt(var_log_index(view, statistic.method, statistic.options));
}

/// Point estimate and delta-method variance of the log index on one dataset.
std::pair<double, double> estimate_with_variance(const ComparisonDataset& dataset,
                                                 IndexMethod method, const std::string& target,
                                                 const std::string& base,
                                                 const BilateralOptions& options) {
    if (method == IndexMethod::Geks) {
        const GeksResult geks = geks_with_variance(dataset, base);
        return {geks.log_index_of(target), geks.var_log_of(target).value()};
    }
    const BilateralView view = dataset.bilateral_view(target, base);
    return {bilateral_index(view, method, options).log_value,
            var_log_index(view, method, options)};
}

std::string item_label_for(int index, int width) {
    std::string digits = std::to_string(index + 1);
    if (std::cmp_less(digits.size(), width)) {
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    }
    return "I" + digits;
}

/// Entry `n` of a broadcastable per-item vector (length 1 or n_items).
double spec_entry(const std::vector<double>& values, std::size_t n) {
    return values.size() == 1 ? values[0] : values[n];
}

void validate_error_spec(const LopErrorSpec& errors, std::size_t n_items) {
    const auto check_length = [&](const std::vector<double>& values, const char* name) {
        if (values.size() != 1 && values.size() != n_items) {
            throw std::invalid_argument(std::string("error spec '") + name +
                                        "' must have length 1 or one entry per item");
        }
    };
    check_length(errors.sigma_target, "sigma_target");
    check_length(errors.sigma_base, "sigma_base");
    check_length(errors.covariance, "covariance");
    for (std::size_t n = 0; n < n_items; ++n) {
        const double st = spec_entry(errors.sigma_target, n);
        const double sb = spec_entry(errors.sigma_base, n);
        const double cov = spec_entry(errors.covariance, n);
        if (!std::isfinite(st) || !std::isfinite(sb) || !std::isfinite(cov)) {
            throw std::invalid_argument("error spec entries must be finite");
        }
        if (st < 0.0 || sb < 0.0) {
            throw std::invalid_argument("error standard deviations must be nonnegative");
        }
        if (std::abs(cov) > st * sb) {
            throw std::invalid_argument(
                "error covariance exceeds the product of standard deviations");
        }
    }
}

} // namespace

BootstrapResult bootstrap_se(const ComparisonDataset& dataset, const BootstrapConfig& config) {
    if (config.replications < 2) {
        throw std::invalid_argument("bootstrap needs at least 2 replications");
    }
    // Resolve the locations up front so a typo fails fast, not per replicate.
    dataset.location_index(config.statistic.target);
    dataset.location_index(config.statistic.base);

    const std::size_t n_items = dataset.item_count();
    const int replications = config.replications;
    std::vector<std::optional<double>> slots(static_cast<std::size_t>(replications));

    parallel_for(replications, config.threads, [&](int r) {
        rng::Sampler sampler =
            rng::Sampler::substream(config.seed, static_cast<std::uint64_t>(r));
        std::vector<std::size_t> rows(n_items);
        for (std::size_t i = 0; i < n_items; ++i) rows[i] = sampler.uniform_index(n_items);
        try {
            const ComparisonDataset resampled = dataset.with_resampled_items(rows);
            slots[static_cast<std::size_t>(r)] = log_statistic(resampled, config.statistic);
        } catch (const std::domain_error&) {
            // Statistic undefined on this replicate: drop it and count it below.
        } catch (const std::invalid_argument&) {
            // The resample itself is degenerate (e.g. its expenditures total
            // exactly zero in one location, so shares cannot be formed).
            // Locations were resolved before the loop, so this cannot mask a
            // caller error; treat it as an undefined replicate too.
        }
    });

    // Fixed-order reduction over replicate indices keeps the result
    // byte-identical for any thread count. The mean is computed relative to
    // the first defined value (assumed-mean form): it reduces cancellation
    // and makes a bitwise-constant statistic yield an SD of exactly zero.
    int effective = 0;
    double shift = 0.0;
    double shifted_sum = 0.0;
    for (const auto& slot : slots) {
        if (slot) {
            if (effective == 0) shift = *slot;
            ++effective;
            shifted_sum += *slot - shift;
        }
    }
    if (effective < 2) {
        throw std::domain_error("bootstrap failed: fewer than 2 replicates produced a "
                                "defined statistic");
    }
    const double mean = shift + shifted_sum / effective;
    double ssq = 0.0;
    for (const auto& slot : slots) {
        if (slot) {
            const double dev = *slot - mean;
            ssq += dev * dev;
        }
    }

    BootstrapResult result;
    result.replications = replications;
    result.replicate_count_effective = effective;
    result.se_log = std::sqrt(ssq / (effective - 1));
    result.delta_se_log = analytic_se_log(dataset, config.statistic);
    const double dropped = static_cast<double>(replications - effective);
    result.drop_warning = dropped / replications > config.drop_warning_fraction;
    return result;
}

GeneratedLopDataset generate_lop_dataset(const LopGeneratorConfig& config) {
    if (config.n_items < 2) {
        throw std::invalid_argument("generator needs at least 2 items");
    }
    if (!(config.item_effect_spread >= 0.0) || !std::isfinite(config.item_effect_spread)) {
        throw std::invalid_argument("item effect spread must be nonnegative and finite");
    }
    if (!(config.dirichlet_concentration > 0.0)) {
        throw std::invalid_argument("Dirichlet concentration must be positive");
    }
    if (config.target_label == config.base_label) {
        throw std::invalid_argument("generator location labels must differ");
    }
    const std::size_t n_items = static_cast<std::size_t>(config.n_items);
    validate_error_spec(config.errors, n_items);

    rng::Sampler sampler(config.seed);
    std::vector<double> item_effects(n_items);
    std::vector<double> prices(n_items * 2);
    for (std::size_t n = 0; n < n_items; ++n) {
        item_effects[n] = sampler.normal(0.0, config.item_effect_spread);
        const double st = spec_entry(config.errors.sigma_target, n);
        const double sb = spec_entry(config.errors.sigma_base, n);
        const double cov = spec_entry(config.errors.covariance, n);
        const double z1 = sampler.normal();
        const double z2 = sampler.normal();
        const double eps_target = st * z1;
        double eps_base;
        if (st > 0.0) {
            const double slope = cov / st; // regression of base error on z1
            const double resid_var = std::max(sb * sb - slope * slope, 0.0);
            eps_base = slope * z1 + std::sqrt(resid_var) * z2;
        } else {
            eps_base = sb * z2;
        }
        prices[n * 2] = std::exp(config.log_level_target + item_effects[n] + eps_target);
        prices[n * 2 + 1] = std::exp(config.log_level_base + item_effects[n] + eps_base);
    }

    // Expenditure shares are the expenditures: each column of the Dirichlet
    // draw sums to 1, so shares computed from them reproduce the draw.
    const std::vector<double> shares_target =
        sampler.dirichlet(n_items, config.dirichlet_concentration);
    const std::vector<double> shares_base =
        sampler.dirichlet(n_items, config.dirichlet_concentration);
    std::vector<double> expenditures(n_items * 2);
    for (std::size_t n = 0; n < n_items; ++n) {
        expenditures[n * 2] = shares_target[n];
        expenditures[n * 2 + 1] = shares_base[n];
    }

    int width = 1;
    for (int scale = config.n_items; scale >= 10; scale /= 10) ++width;
    std::vector<std::string> items;
    items.reserve(n_items);
    for (int n = 0; n < config.n_items; ++n) items.push_back(item_label_for(n, width));

    GeneratedLopDataset generated{
        ComparisonDataset(std::move(items), {config.target_label, config.base_label},
                          std::move(prices), std::move(expenditures)),
        config.log_level_target - config.log_level_base, std::move(item_effects),
        "dirichlet(concentration=" + format_full(config.dirichlet_concentration) + ")"};
    return generated;
}

CoverageResult coverage_experiment(const CoverageConfig& config) {
    if (config.replications < 1) {
        throw std::invalid_argument("coverage experiment needs at least 1 replication");
    }
    if (!(config.critical_value > 0.0)) {
        throw std::invalid_argument("critical value must be positive");
    }

    struct Outcome {
        bool covered = false;
        double se_log = 0.0;
    };
    const int replications = config.replications;
    std::vector<std::optional<Outcome>> slots(static_cast<std::size_t>(replications));
    const double truth = config.generator.log_level_target - config.generator.log_level_base;

    parallel_for(replications, config.threads, [&](int r) {
        LopGeneratorConfig generator = config.generator;
        generator.seed = rng::Sampler::derive_seed(config.seed, static_cast<std::uint64_t>(r));
        const GeneratedLopDataset generated = generate_lop_dataset(generator);
        try {
            const auto [estimate, var_log] = estimate_with_variance(
                generated.dataset, config.method, config.generator.target_label,
                config.generator.base_label, config.options);
            const double se = std::sqrt(var_log);
            Outcome outcome;
            outcome.se_log = se;
            // The 1e-12 guard keeps the zero-noise case, where both the error
            // and the interval half-width are pure round-off, scored covered.
            outcome.covered =
                std::abs(estimate - truth) <= config.critical_value * se + 1e-12;
            slots[static_cast<std::size_t>(r)] = outcome;
        } catch (const std::domain_error&) {
            // Estimate undefined on this draw: drop and count below.
        }
    });

    int effective = 0;
    int covered = 0;
    double se_sum = 0.0;
    for (const auto& slot : slots) {
        if (slot) {
            ++effective;
            covered += slot->covered ? 1 : 0;
            se_sum += slot->se_log;
        }
    }
    if (effective == 0) {
        throw std::domain_error("coverage experiment failed: no replication produced a "
                                "defined estimate");
    }

    CoverageResult result;
    result.method = config.method;
    result.replications = replications;
    result.replicate_count_effective = effective;
    result.coverage = static_cast<double>(covered) / effective;
    result.mean_se_log = se_sum / effective;
    result.true_log_parity = truth;
    result.expenditure_model = "dirichlet(concentration=" +
                               format_full(config.generator.dirichlet_concentration) + ")";
    return result;
}

} // namespace priceidx
