#include "priceidx/dissimilarity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "priceidx/rng.hpp"
#include "priceidx/variance.hpp"

namespace priceidx {

namespace {

constexpr std::size_t kMeasureCount = 6;

WeightKind d6_weight_kind(IndexMethod method) {
    switch (method) {
        case IndexMethod::Tornqvist: return WeightKind::Arithmetic;
        case IndexMethod::SatoVartia: return WeightKind::Logarithmic;
        case IndexMethod::ProductDummy: return WeightKind::Harmonic;
        default:
            throw std::invalid_argument(
                "the spread measure D6 needs a log-weighted index "
                "(tornqvist, sato-vartia, or product-dummy)");
    }
}

/// Termwise summands of one measure. Each measure's value is defined as the
/// plain left-to-right sum of these terms, so contribution tables reproduce
/// values exactly. Self-pairs are identically zero. Computing one measure
/// never evaluates another measure's prerequisites.
std::vector<double> terms_for(const BilateralView& view, DissimilarityMeasure measure,
                              const DissimilarityOptions& options) {
    const std::size_t n_items = view.size();
    std::vector<double> terms(n_items, 0.0);
    if (view.self_pair()) return terms;

    switch (measure) {
        case DissimilarityMeasure::D1: {
            const double center = fisher(view).value;
            for (std::size_t n = 0; n < n_items; ++n) {
                const double mean_share = 0.5 * (view.shares_target[n] + view.shares_base[n]);
                const double rel = view.price_ratio[n] / center;
                const double rel_inv = center / view.price_ratio[n];
                terms[n] = mean_share *
                           ((rel - 1.0) * (rel - 1.0) + (rel_inv - 1.0) * (rel_inv - 1.0));
            }
            return terms;
        }
        case DissimilarityMeasure::D2: {
            const double center = fisher(view).value;
            for (std::size_t n = 0; n < n_items; ++n) {
                const double mean_share = 0.5 * (view.shares_target[n] + view.shares_base[n]);
                const double rel = view.price_ratio[n] / center;
                terms[n] = mean_share * (rel + 1.0 / rel - 2.0);
            }
            return terms;
        }
        case DissimilarityMeasure::D3: {
            const double center_log =
                log_weighted_index(view, WeightKind::Arithmetic).log_value;
            for (std::size_t n = 0; n < n_items; ++n) {
                const double mean_share = 0.5 * (view.shares_target[n] + view.shares_base[n]);
                const double log_dev = std::log(view.price_ratio[n]) - center_log;
                terms[n] = mean_share * log_dev * log_dev;
            }
            return terms;
        }
        case DissimilarityMeasure::D4: {
            const FisherScoreVector scores = fisher_scores(view);
            for (std::size_t n = 0; n < n_items; ++n) {
                terms[n] = scores.values[n] * scores.values[n];
            }
            return terms;
        }
        case DissimilarityMeasure::D5: {
            const WalshDecomposition d = walsh_decomposition(view, options.walsh_policy);
            const double inv_a = 1.0 / d.current_aggregate;
            const double inv_b = 1.0 / d.base_aggregate;
            for (std::size_t n = 0; n < n_items; ++n) {
                const double root = std::sqrt(view.price_ratio[n]);
                const double dev = d.weights[n] * (inv_a * root - inv_b / root);
                terms[n] = dev * dev;
            }
            return terms;
        }
        case DissimilarityMeasure::D6: {
            const WeightScheme scheme = weight_scheme(view, d6_weight_kind(options.d6_method),
                                                      options.tolerate_zero_shares);
            const double center_log = log_weighted_index(view, scheme).log_value;
            for (std::size_t n = 0; n < n_items; ++n) {
                const double dev = scheme.values[n] * (std::log(view.price_ratio[n]) - center_log);
                terms[n] = dev * dev;
            }
            return terms;
        }
    }
    throw std::invalid_argument("unknown dissimilarity measure");
}

double sum_terms(const std::vector<double>& terms) {
    double sum = 0.0;
    for (const double t : terms) sum += t;
    return sum;
}

} // namespace

std::string_view measure_name(DissimilarityMeasure measure) noexcept {
    switch (measure) {
        case DissimilarityMeasure::D1: return "D1";
        case DissimilarityMeasure::D2: return "D2";
        case DissimilarityMeasure::D3: return "D3";
        case DissimilarityMeasure::D4: return "D4";
        case DissimilarityMeasure::D5: return "D5";
        case DissimilarityMeasure::D6: return "D6";
    }
    return "?";
}

std::optional<DissimilarityMeasure> parse_measure(std::string_view text) noexcept {
    if (text.size() == 2 && (text[0] == 'D' || text[0] == 'd') && text[1] >= '1' &&
        text[1] <= '6') {
        return static_cast<DissimilarityMeasure>(text[1] - '1');
    }
    return std::nullopt;
}

double AxiomCheckReport::max_violation() const {
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, row.max_violation);
    return worst;
}

DissimilarityReport dissimilarity_report(const BilateralView& view,
                                         const DissimilarityOptions& options) {
    DissimilarityReport report;
    report.target = view.target;
    report.base = view.base;
    report.d6_method = options.d6_method;
    for (std::size_t i = 0; i < kMeasureCount; ++i) {
        const auto measure = static_cast<DissimilarityMeasure>(i);
        report.contributions[i] = terms_for(view, measure, options);
        report.values[i] = sum_terms(report.contributions[i]);
        if (report.values[i] < 0.0) report.negative_warnings.push_back(measure);
    }
    return report;
}

double dissimilarity(const BilateralView& view, DissimilarityMeasure measure,
                     const DissimilarityOptions& options) {
    return sum_terms(terms_for(view, measure, options));
}

std::array<double, 3> diewert_measures(const BilateralView& view) {
    const DissimilarityOptions options{};
    return {dissimilarity(view, DissimilarityMeasure::D1, options),
            dissimilarity(view, DissimilarityMeasure::D2, options),
            dissimilarity(view, DissimilarityMeasure::D3, options)};
}

std::array<double, 3> variance_measures(const BilateralView& view,
                                        const DissimilarityOptions& options) {
    return {dissimilarity(view, DissimilarityMeasure::D4, options),
            dissimilarity(view, DissimilarityMeasure::D5, options),
            dissimilarity(view, DissimilarityMeasure::D6, options)};
}

std::vector<double> contribution_table(const BilateralView& view, DissimilarityMeasure measure,
                                       const DissimilarityOptions& options) {
    return terms_for(view, measure, options);
}

AxiomCheckReport axiom_check(DissimilarityMeasure measure, const ComparisonDataset& dataset,
                             int trials, std::uint64_t seed, double tolerance,
                             const DissimilarityOptions& options) {
    AxiomCheckReport report;
    report.measure = measure;
    report.trials = trials;
    report.tolerance = tolerance;
    report.rows = {
        AxiomCheckRow{"identity-zero", "D(j,j) = 0", 0.0},
        AxiomCheckRow{"nonnegative", "D(j,k) >= 0", 0.0},
        AxiomCheckRow{"symmetric", "D(j,k) = D(k,j)", 0.0},
        AxiomCheckRow{"proportional-zero", "prices proportional => D = 0", 0.0},
        AxiomCheckRow{"positive-when-nonproportional", "prices not proportional => D > 0", 0.0},
        AxiomCheckRow{"permutation-invariant", "item reordering leaves D unchanged", 0.0},
        AxiomCheckRow{"unit-invariant", "per-item unit rescaling leaves D unchanged", 0.0},
    };

    rng::Sampler sampler(seed);
    const std::size_t m = dataset.location_count();
    const std::size_t n_items = dataset.item_count();

    auto eval = [&](const ComparisonDataset& d, std::size_t target, std::size_t base) {
        return dissimilarity(d.bilateral_view(target, base), measure, options);
    };
    auto bump = [&](std::size_t axiom, double violation) {
        report.rows[axiom].max_violation = std::max(report.rows[axiom].max_violation, violation);
    };

    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t j = sampler.uniform_index(m);
        std::size_t k = sampler.uniform_index(m - 1);
        if (k >= j) ++k;

        const double d_jk = eval(dataset, j, k);
        const double scale = std::max(1.0, std::abs(d_jk));

        bump(0, std::abs(eval(dataset, j, j)));
        bump(1, std::max(0.0, -d_jk));
        bump(2, std::abs(d_jk - eval(dataset, k, j)) / scale);

        // Axiom 4: replace location j's prices with λ · (location k's prices).
        const double lambda = std::exp(sampler.uniform(-1.0, 1.0));
        std::vector<double> proportional(n_items);
        for (std::size_t n = 0; n < n_items; ++n) {
            proportional[n] = lambda * dataset.price(n, k);
        }
        bump(3, std::abs(eval(dataset.with_location_prices(j, proportional), j, k)));

        // Axiom 5: whenever the pair's price relatives clearly spread out,
        // the measure must be strictly positive. The spread guard keeps the
        // check away from the near-proportional regime where a legitimate
        // measure value sits at round-off scale.
        const BilateralView view = dataset.bilateral_view(j, k);
        double min_log = std::log(view.price_ratio[0]);
        double max_log = min_log;
        for (const double ratio : view.price_ratio) {
            const double lr = std::log(ratio);
            min_log = std::min(min_log, lr);
            max_log = std::max(max_log, lr);
        }
        if (max_log - min_log > 1e-3) {
            bump(4, d_jk > 1e-12 ? 0.0 : 1.0);
        }

        // Axiom 6: random item permutation (Fisher-Yates).
        std::vector<std::size_t> permutation(n_items);
        for (std::size_t n = 0; n < n_items; ++n) permutation[n] = n;
        for (std::size_t n = n_items; n > 1; --n) {
            std::swap(permutation[n - 1], permutation[sampler.uniform_index(n)]);
        }
        bump(5, std::abs(eval(dataset.with_items_permuted(permutation), j, k) - d_jk) / scale);

        // Axiom 7: random per-item unit factors in [1/2, 2].
        std::vector<double> factors(n_items);
        for (auto& c : factors) {
            c = std::exp(sampler.uniform(-std::numbers::ln2, std::numbers::ln2));
        }
        bump(6, std::abs(eval(dataset.with_item_prices_rescaled(factors), j, k) - d_jk) / scale);
    }

    report.passed = report.max_violation() <= tolerance;
    return report;
}

} // namespace priceidx
