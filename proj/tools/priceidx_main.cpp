// Command-line front end: loads price/expenditure CSV matrices, runs the
// requested computation, and writes plot-ready CSV reports. Exit codes:
// 0 success, 1 input error, 2 validation failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "priceidx/bilateral.hpp"
#include "priceidx/csv_io.hpp"
#include "priceidx/dataset.hpp"
#include "priceidx/dissimilarity.hpp"
#include "priceidx/geks.hpp"
#include "priceidx/property_suite.hpp"
#include "priceidx/resampling.hpp"
#include "priceidx/variance.hpp"

namespace {

using namespace priceidx;

constexpr double kCritical95 = 1.96;

struct CommonArgs {
    std::string prices_path;
    std::string expenditures_path;
    std::string base;      // empty = last column
    std::string out_dir = ".";
    std::uint64_t seed = 0;
};

struct PolicyArgs {
    std::string walsh_negative = "error";
    bool tolerate_zero_shares = false;
};

void add_dataset_flags(CLI::App* sub, CommonArgs& args, bool required) {
    auto* p = sub->add_option("--prices", args.prices_path, "Price matrix CSV");
    auto* e = sub->add_option("--expenditures", args.expenditures_path, "Expenditure matrix CSV");
    if (required) {
        p->required();
        e->required();
    }
    sub->add_option("--base", args.base, "Base location id (default: last column)");
    sub->add_option("--out", args.out_dir, "Output directory (default: current)");
    sub->add_option("--seed", args.seed, "Random seed for seeded subcommands");
}

void add_policy_flags(CLI::App* sub, PolicyArgs& args) {
    sub->add_option("--walsh-negative", args.walsh_negative,
                    "Negative share-product policy for Walsh weights: error|drop")
        ->check(CLI::IsMember({"error", "drop"}));
    sub->add_flag("--tolerate-zero-shares", args.tolerate_zero_shares,
                  "Treat zero shares as zero weight instead of failing");
}

BilateralOptions make_options(const PolicyArgs& args) {
    BilateralOptions options;
    options.walsh_policy = args.walsh_negative == "drop" ? WalshNegativePolicy::Drop
                                                         : WalshNegativePolicy::Error;
    options.tolerate_zero_shares = args.tolerate_zero_shares;
    return options;
}

ComparisonDataset load_from(const CommonArgs& args) {
    return load_dataset(args.prices_path, args.expenditures_path);
}

std::string resolve_base(const ComparisonDataset& dataset, const std::string& base) {
    if (base.empty()) return dataset.locations().back();
    dataset.location_index(base); // throws std::invalid_argument on unknown id
    return base;
}

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void announce(const std::filesystem::path& path) {
    std::cout << "wrote " << path.string() << "\n";
}

/// Parses a comma-separated method list; rejects the multilateral tag.
std::vector<IndexMethod> parse_method_list(const std::string& text) {
    std::vector<IndexMethod> methods;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string::npos ? text.size() : comma;
        const std::string token = text.substr(start, end - start);
        if (!token.empty()) {
            const std::optional<IndexMethod> method = parse_method(token);
            if (!method) throw std::invalid_argument("unknown method '" + token + "'");
            if (*method == IndexMethod::Geks) {
                throw std::invalid_argument(
                    "'geks' is multilateral; use the geks subcommand (or --include-geks "
                    "under bootstrap)");
            }
            if (std::find(methods.begin(), methods.end(), *method) == methods.end()) {
                methods.push_back(*method);
            }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (methods.empty()) throw std::invalid_argument("methods list is empty");
    return methods;
}

std::string fmt(double value) { return format_full(value); }

// ---------------------------------------------------------------- bilateral

int run_bilateral(const CommonArgs& common, const PolicyArgs& policy,
                  const std::string& methods_text) {
    const std::vector<IndexMethod> methods = parse_method_list(methods_text);
    const BilateralOptions options = make_options(policy);
    const ComparisonDataset dataset = load_from(common);
    const std::string base = resolve_base(dataset, common.base);
    const std::filesystem::path dir = prepare_out_dir(common.out_dir);

    CsvTable indexes({"target", "base", "method", "status", "value", "log_value", "se_log",
                      "ci_log_low", "ci_log_high"});

    struct GapAccumulator {
        double sum = 0.0;
        int pairs = 0;
    };
    std::vector<GapAccumulator> gaps(methods.size());

    for (const std::string& target : dataset.locations()) {
        if (target == base) continue;
        const BilateralView view = dataset.bilateral_view(target, base);

        std::optional<double> log_fisher;
        try {
            log_fisher = fisher(view).log_value;
        } catch (const std::exception&) {
            // leaves the comparison table without this pair
        }

        for (std::size_t m = 0; m < methods.size(); ++m) {
            const IndexMethod method = methods[m];
            try {
                const IndexEstimate estimate = bilateral_index(view, method, options);
                const double se = std::sqrt(var_log_index(view, method, options));
                indexes.add_row({target, base, std::string(method_name(method)), "ok",
                                 fmt(estimate.value), fmt(estimate.log_value), fmt(se),
                                 fmt(estimate.log_value - kCritical95 * se),
                                 fmt(estimate.log_value + kCritical95 * se)});
                if (log_fisher) {
                    gaps[m].sum += 100.0 * std::abs(estimate.log_value - *log_fisher);
                    gaps[m].pairs += 1;
                }
            } catch (const std::exception& failure) {
                indexes.add_row({target, base, std::string(method_name(method)),
                                 std::string("error: ") + failure.what(), "", "", "", "", ""});
            }
        }
    }

    CsvTable comparison({"method", "mean_abs_log_gap_vs_fisher_x100", "pairs_used"});
    for (std::size_t m = 0; m < methods.size(); ++m) {
        comparison.add_row({std::string(method_name(methods[m])),
                            gaps[m].pairs > 0 ? fmt(gaps[m].sum / gaps[m].pairs) : "",
                            std::to_string(gaps[m].pairs)});
    }

    indexes.write(dir / "indexes.csv");
    announce(dir / "indexes.csv");
    comparison.write(dir / "comparison_table.csv");
    announce(dir / "comparison_table.csv");
    return 0;
}

// --------------------------------------------------------------------- geks

int run_geks(const CommonArgs& common) {
    const ComparisonDataset dataset = load_from(common);
    const std::string base = resolve_base(dataset, common.base);
    const std::filesystem::path dir = prepare_out_dir(common.out_dir);

    const GeksResult geks = geks_with_variance(dataset, base);

    CsvTable table({"location", "base", "log_index", "value", "se_log"});
    for (std::size_t m = 0; m < geks.locations.size(); ++m) {
        table.add_row({geks.locations[m], base, fmt(geks.log_index[m]),
                       fmt(std::exp(geks.log_index[m])), fmt(std::sqrt(geks.var_log[m]))});
    }

    CsvTable vs_fisher(
        {"location", "base", "geks_log", "fisher_log", "gap_log_pct", "se_log_fisher"});
    CsvTable se_compare({"location", "base", "se_log_geks", "se_log_fisher", "se_ratio"});
    for (const GeksFisherGapRow& row : geks_fisher_gap_report(dataset, base)) {
        vs_fisher.add_row({row.location, base, fmt(row.geks_log), fmt(row.fisher_log),
                           fmt(row.gap_log_pct), fmt(row.se_log_fisher)});
        const double se_geks =
            std::sqrt(geks.var_log_of(row.location).value());
        se_compare.add_row({row.location, base, fmt(se_geks), fmt(row.se_log_fisher),
                            row.se_log_fisher > 0.0 ? fmt(se_geks / row.se_log_fisher) : ""});
    }

    table.write(dir / "geks.csv");
    announce(dir / "geks.csv");
    vs_fisher.write(dir / "geks_vs_fisher.csv");
    announce(dir / "geks_vs_fisher.csv");
    se_compare.write(dir / "se_compare.csv");
    announce(dir / "se_compare.csv");
    return 0;
}

// ------------------------------------------------------------ dissimilarity

int run_dissimilarity(const CommonArgs& common, const PolicyArgs& policy,
                      const std::string& d6_text, bool scale_150) {
    const std::optional<IndexMethod> d6 = parse_method(d6_text);
    if (!d6 || (*d6 != IndexMethod::Tornqvist && *d6 != IndexMethod::SatoVartia &&
                *d6 != IndexMethod::ProductDummy)) {
        throw std::invalid_argument("--d6-method must be tornqvist, sv, or pd");
    }
    DissimilarityOptions options;
    options.d6_method = *d6;
    const BilateralOptions bilateral_options = make_options(policy);
    options.walsh_policy = bilateral_options.walsh_policy;
    options.tolerate_zero_shares = bilateral_options.tolerate_zero_shares;

    const ComparisonDataset dataset = load_from(common);
    const std::filesystem::path dir = prepare_out_dir(common.out_dir);
    const double scale = scale_150 ? 150.0 : 1.0;
    const std::size_t locations = dataset.location_count();

    // One report per unordered pair; the measures are symmetric.
    std::vector<std::optional<DissimilarityReport>> reports(locations * locations);
    for (std::size_t j = 0; j < locations; ++j) {
        for (std::size_t k = j + 1; k < locations; ++k) {
            reports[j * locations + k] =
                dissimilarity_report(dataset.bilateral_view(j, k), options);
        }
    }
    const auto report_at = [&](std::size_t row, std::size_t col)
        -> const DissimilarityReport& {
        return row < col ? *reports[row * locations + col] : *reports[col * locations + row];
    };

    std::vector<std::string> header{"location"};
    header.insert(header.end(), dataset.locations().begin(), dataset.locations().end());
    for (const DissimilarityMeasure measure : kAllDissimilarityMeasures) {
        CsvTable matrix(header);
        for (std::size_t row = 0; row < locations; ++row) {
            std::vector<std::string> cells{dataset.locations()[row]};
            for (std::size_t col = 0; col < locations; ++col) {
                cells.push_back(
                    row == col ? fmt(0.0) : fmt(scale * report_at(row, col).value(measure)));
            }
            matrix.add_row(std::move(cells));
        }
        const std::filesystem::path path =
            dir / (std::string("dissimilarity_") + std::string(measure_name(measure)) + ".csv");
        matrix.write(path);
        announce(path);
    }

    CsvTable contributions({"target", "base", "item", "measure", "contribution"});
    for (std::size_t j = 0; j < locations; ++j) {
        for (std::size_t k = j + 1; k < locations; ++k) {
            const DissimilarityReport& report = report_at(j, k);
            for (const DissimilarityMeasure measure : kAllDissimilarityMeasures) {
                const std::vector<double>& terms = report.contribution(measure);
                for (std::size_t n = 0; n < terms.size(); ++n) {
                    contributions.add_row({report.target, report.base, dataset.items()[n],
                                           std::string(measure_name(measure)),
                                           fmt(scale * terms[n])});
                }
            }
        }
    }
    contributions.write(dir / "contributions.csv");
    announce(dir / "contributions.csv");
    return 0;
}

// ---------------------------------------------------------------- bootstrap

int run_bootstrap(const CommonArgs& common, const PolicyArgs& policy,
                  const std::string& methods_text, int replications, int threads,
                  bool include_geks) {
    const std::vector<IndexMethod> methods = parse_method_list(methods_text);
    const BilateralOptions options = make_options(policy);
    const ComparisonDataset dataset = load_from(common);
    const std::string base = resolve_base(dataset, common.base);
    const std::filesystem::path dir = prepare_out_dir(common.out_dir);

    CsvTable report({"target", "base", "method", "status", "se_log_formula", "se_log_bootstrap",
                     "replications", "effective_replicates", "drop_warning"});

    std::vector<IndexMethod> all_methods = methods;
    if (include_geks) all_methods.push_back(IndexMethod::Geks);

    for (const std::string& target : dataset.locations()) {
        if (target == base) continue;
        for (const IndexMethod method : all_methods) {
            BootstrapConfig config;
            config.replications = replications;
            config.seed = common.seed;
            config.threads = threads;
            config.statistic = BootstrapStatistic{method, target, base, options};
            try {
                const BootstrapResult result = bootstrap_se(dataset, config);
                report.add_row({target, base, std::string(method_name(method)), "ok",
                                fmt(result.delta_se_log), fmt(result.se_log),
                                std::to_string(result.replications),
                                std::to_string(result.replicate_count_effective),
                                result.drop_warning ? "yes" : "no"});
            } catch (const std::exception& failure) {
                report.add_row({target, base, std::string(method_name(method)),
                                std::string("error: ") + failure.what(), "", "", "", "", ""});
            }
        }
    }

    report.write(dir / "bootstrap.csv");
    announce(dir / "bootstrap.csv");
    return 0;
}

// ----------------------------------------------------------------- validate

int run_validate(const CommonArgs& common, int trials) {
    const std::filesystem::path dir = prepare_out_dir(common.out_dir);
    const PropertySuiteReport suite = run_all_properties(common.seed, trials);

    CsvTable table({"property", "description", "trials", "max_violation", "tolerance", "passed"});
    bool all_passed = suite.all_passed;

    std::cout << "property suite: seed " << common.seed << ", " << trials << " trials\n";
    for (const PropertyResult& result : suite.results) {
        table.add_row({result.id, result.description, std::to_string(result.trials),
                       fmt(result.max_violation), fmt(result.tolerance),
                       result.passed ? "yes" : "no"});
        std::printf("  %-38s max %.3e  tol %.3e  %s\n", result.id.c_str(),
                    result.max_violation, result.tolerance, result.passed ? "PASS" : "FAIL");
    }

    // With a dataset supplied, additionally run the randomized measure-axiom
    // check against that data.
    if (!common.prices_path.empty() || !common.expenditures_path.empty()) {
        if (common.prices_path.empty() || common.expenditures_path.empty()) {
            throw std::invalid_argument("validate needs both --prices and --expenditures "
                                        "when checking a dataset");
        }
        const ComparisonDataset dataset = load_from(common);
        std::cout << "dataset axiom check: " << common.prices_path << "\n";
        for (const DissimilarityMeasure measure : kAllDissimilarityMeasures) {
            const AxiomCheckReport axioms =
                axiom_check(measure, dataset, std::max(trials, 1), common.seed);
            for (const AxiomCheckRow& row : axioms.rows) {
                const bool passed = row.max_violation <= axioms.tolerance;
                all_passed = all_passed && passed;
                table.add_row({std::string("data-") + std::string(measure_name(measure)) + "-" +
                                   row.axiom,
                               row.description, std::to_string(axioms.trials),
                               fmt(row.max_violation), fmt(axioms.tolerance),
                               passed ? "yes" : "no"});
            }
            std::printf("  data %-33s max %.3e  %s\n",
                        std::string(measure_name(measure)).c_str(), axioms.max_violation(),
                        axioms.passed ? "PASS" : "FAIL");
        }
    }

    table.write(dir / "validation.csv");
    announce(dir / "validation.csv");
    std::cout << (all_passed ? "all checks passed\n" : "VALIDATION FAILURES FOUND\n");
    return all_passed ? 0 : 2;
}

// ----------------------------------------------------------------- simulate

int run_simulate(const CommonArgs& common, const std::string& methods_text, int replications,
                 int items, int threads, double log_parity, double item_spread, double sigma,
                 double sigma_base, double covariance, double concentration) {
    const std::vector<IndexMethod> methods = parse_method_list(methods_text);
    const std::filesystem::path dir = prepare_out_dir(common.out_dir);

    LopGeneratorConfig generator;
    generator.n_items = items;
    generator.log_level_target = log_parity;
    generator.log_level_base = 0.0;
    generator.item_effect_spread = item_spread;
    generator.errors.sigma_target = {sigma};
    generator.errors.sigma_base = {sigma_base < 0.0 ? sigma : sigma_base};
    generator.errors.covariance = {covariance};
    generator.dirichlet_concentration = concentration;
    generator.seed = common.seed;

    CsvTable table({"method", "coverage", "replications", "effective_replicates", "mean_se_log",
                    "true_log_parity", "critical_value", "expenditure_model"});
    for (const IndexMethod method : methods) {
        CoverageConfig config;
        config.generator = generator;
        config.method = method;
        config.replications = replications;
        config.seed = common.seed;
        config.threads = threads;
        config.critical_value = kCritical95;
        const CoverageResult result = coverage_experiment(config);
        table.add_row({std::string(method_name(method)), fmt(result.coverage),
                       std::to_string(result.replications),
                       std::to_string(result.replicate_count_effective),
                       fmt(result.mean_se_log), fmt(result.true_log_parity),
                       fmt(kCritical95), result.expenditure_model});
        std::printf("  %-12s coverage %.4f over %d replications (mean SE %.5f)\n",
                    std::string(method_name(method)).c_str(), result.coverage,
                    result.replicate_count_effective, result.mean_se_log);
    }

    table.write(dir / "coverage.csv");
    announce(dir / "coverage.csv");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilateral and multilateral price-index computation with "
                 "delta-method standard errors, dissimilarity measures, bootstrap "
                 "cross-checks, and simulation harnesses"};
    app.require_subcommand(1);

    CommonArgs common;
    PolicyArgs policy;
    std::string methods_text = "laspeyres,paasche,fisher,tornqvist,sato-vartia,product-dummy,walsh";
    std::string d6_text = "tornqvist";
    bool scale_150 = false;
    bool include_geks = false;
    int replications = 2000;
    int trials = 100;
    int threads = 0;
    int sim_items = 150;
    int sim_replications = 1000;
    double sim_log_parity = 0.1;
    double sim_item_spread = 1.0;
    double sim_sigma = 0.2;
    double sim_sigma_base = -1.0;
    double sim_covariance = 0.0;
    double sim_concentration = 2.0;
    std::string sim_methods = "tornqvist,fisher";

    CLI::App* bilateral = app.add_subcommand(
        "bilateral", "All requested bilateral indexes against a base location");
    add_dataset_flags(bilateral, common, true);
    add_policy_flags(bilateral, policy);
    bilateral->add_option("--methods", methods_text, "Comma-separated method list");

    CLI::App* geks = app.add_subcommand(
        "geks", "Transitive multilateral indexes with standard errors");
    add_dataset_flags(geks, common, true);

    CLI::App* dissimilarity = app.add_subcommand(
        "dissimilarity", "Price-dissimilarity matrices and per-item contributions");
    add_dataset_flags(dissimilarity, common, true);
    add_policy_flags(dissimilarity, policy);
    dissimilarity->add_option("--d6-method", d6_text,
                              "Log-weighted index whose variance is D6: tornqvist|sv|pd");
    dissimilarity->add_flag("--scale-150", scale_150, "Multiply reported values by 150");

    CLI::App* bootstrap = app.add_subcommand(
        "bootstrap", "Bootstrap standard errors next to the closed-form ones");
    add_dataset_flags(bootstrap, common, true);
    add_policy_flags(bootstrap, policy);
    bootstrap->add_option("--methods", methods_text, "Comma-separated method list");
    bootstrap->add_option("--replications", replications, "Bootstrap replications (default 2000)")
        ->check(CLI::PositiveNumber);
    bootstrap->add_option("--threads", threads, "Worker threads (0 = all cores)");
    bootstrap->add_flag("--include-geks", include_geks,
                        "Also bootstrap the multilateral index per target");

    CLI::App* validate = app.add_subcommand(
        "validate", "Run the cross-module property suite (and dataset axioms if files given)");
    add_dataset_flags(validate, common, false);
    validate->add_option("--trials", trials, "Random instances per property (default 100)")
        ->check(CLI::NonNegativeNumber);

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo interval-coverage experiment on synthetic data");
    simulate->add_option("--out", common.out_dir, "Output directory (default: current)");
    simulate->add_option("--seed", common.seed, "Master seed");
    simulate->add_option("--methods", sim_methods, "Comma-separated method list");
    simulate->add_option("--replications", sim_replications,
                         "Monte Carlo replications (default 1000)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--items", sim_items, "Items per synthetic dataset (default 150)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--threads", threads, "Worker threads (0 = all cores)");
    simulate->add_option("--log-parity", sim_log_parity, "True log price-level ratio");
    simulate->add_option("--item-spread", sim_item_spread, "SD of the common item effects");
    simulate->add_option("--sigma", sim_sigma, "SD of the target-location log-price error");
    simulate->add_option("--sigma-base", sim_sigma_base,
                         "SD of the base-location log-price error (default: --sigma)");
    simulate->add_option("--covariance", sim_covariance,
                         "Covariance of the two log-price errors");
    simulate->add_option("--dirichlet", sim_concentration,
                         "Dirichlet concentration of the expenditure shares");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (bilateral->parsed()) return run_bilateral(common, policy, methods_text);
        if (geks->parsed()) return run_geks(common);
        if (dissimilarity->parsed())
            return run_dissimilarity(common, policy, d6_text, scale_150);
        if (bootstrap->parsed())
            return run_bootstrap(common, policy, methods_text, replications, threads,
                                 include_geks);
        if (validate->parsed()) return run_validate(common, trials);
        if (simulate->parsed())
            return run_simulate(common, sim_methods, sim_replications, sim_items, threads,
                                sim_log_parity, sim_item_spread, sim_sigma, sim_sigma_base,
                                sim_covariance, sim_concentration);
    } catch (const std::exception& failure) {
        std::cerr << "error: " << failure.what() << "\n";
        return 1;
    }
    return 0;
}
