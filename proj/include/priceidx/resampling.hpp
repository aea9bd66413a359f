#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "priceidx/bilateral.hpp"
#include "priceidx/dataset.hpp"

namespace priceidx {

/// The statistic a bootstrap run recomputes per replicate: a bilateral index
/// for (target, base), or the multilateral index of `target` with base
/// `base` when method == IndexMethod::Geks.
struct BootstrapStatistic {
    IndexMethod method = IndexMethod::Fisher;
    std::string target;
    std::string base;
    BilateralOptions options{};
};

struct BootstrapConfig {
    int replications = 2000; ///< ≥ 2
    std::uint64_t seed = 0;
    BootstrapStatistic statistic{};
    int threads = 1; ///< 0 = hardware concurrency
    /// Fraction of dropped (undefined-statistic) replicates above which the
    /// result carries a warning flag.
    double drop_warning_fraction = 0.01;
};

struct BootstrapResult {
    double se_log = 0.0; ///< sample SD (R−1 denominator) of replicate log statistics
    int replications = 0;
    int replicate_count_effective = 0; ///< replicates where the statistic existed
    double delta_se_log = 0.0;         ///< analytic SE on the full dataset, for comparison
    bool drop_warning = false;
};

/// Nonparametric bootstrap SE of a log index. Each replicate resamples N
/// item rows jointly (prices and expenditures together, so shares are
/// recomputed from resampled expenditures), recomputes the statistic, and
/// the SE is the sample standard deviation of the replicate log values.
/// Replicates where the statistic is undefined are dropped and counted.
/// Deterministic in (dataset, config): every replicate draws from a private
/// substream of the master seed, and the reduction order is fixed, so the
/// result is byte-identical for any thread count.
BootstrapResult bootstrap_se(const ComparisonDataset& dataset, const BootstrapConfig& config);

/// Per-item error spec of the two-location synthetic generator: standard
/// deviations of the target and base log-price errors and their covariance.
/// Each vector has either length n_items or length 1 (broadcast).
struct LopErrorSpec {
    std::vector<double> sigma_target{0.0};
    std::vector<double> sigma_base{0.0};
    std::vector<double> covariance{0.0};
};

/// Configuration of the synthetic law-of-one-price generator:
/// ln p_n,loc = ln level_loc + item_effect_n + ε_n,loc with the given error
/// covariances, and expenditure shares drawn symmetric-Dirichlet,
/// independent of the errors.
struct LopGeneratorConfig {
    int n_items = 150;
    double log_level_target = 0.0;
    double log_level_base = 0.0;
    double item_effect_spread = 1.0; ///< SD of the common item effects
    LopErrorSpec errors{};
    double dirichlet_concentration = 2.0;
    std::uint64_t seed = 0;
    std::string target_label = "TGT";
    std::string base_label = "BASE";
};

/// A generated dataset with its ground truth attached.
struct GeneratedLopDataset {
    ComparisonDataset dataset;
    double true_log_parity = 0.0;      ///< log_level_target − log_level_base
    std::vector<double> item_effects;  ///< the drawn per-item effects
    std::string expenditure_model;     ///< e.g. "dirichlet(concentration=2)"
};

/// Deterministic in seed; byte-identical across runs and thread counts.
/// Throws std::invalid_argument on an invalid error spec (negative sigma,
/// |covariance| > sigma_target·sigma_base, bad lengths).
GeneratedLopDataset generate_lop_dataset(const LopGeneratorConfig& config);

struct CoverageConfig {
    LopGeneratorConfig generator{};
    IndexMethod method = IndexMethod::Tornqvist;
    int replications = 1000;
    std::uint64_t seed = 0;
    int threads = 1; ///< 0 = hardware concurrency
    double critical_value = 1.96;
    BilateralOptions options{};
};

struct CoverageResult {
    IndexMethod method{};
    double coverage = 0.0; ///< fraction of intervals containing the truth
    int replications = 0;
    int replicate_count_effective = 0;
    double mean_se_log = 0.0;
    double true_log_parity = 0.0;
    std::string expenditure_model;
};

/// Monte Carlo interval-coverage experiment: per replication, draw a fresh
/// dataset from the generator (private seed substream), estimate the log
/// index and its delta-method SE, and score whether
/// |estimate − truth| ≤ critical_value · SE (with a 1e-12 absolute guard so
/// the zero-noise case, where both sides are round-off, counts as covered).
/// Deterministic in (config) for any thread count.
CoverageResult coverage_experiment(const CoverageConfig& config);

} // namespace priceidx
