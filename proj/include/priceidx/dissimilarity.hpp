#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "priceidx/bilateral.hpp"
#include "priceidx/dataset.hpp"

namespace priceidx {

/// The six price-dissimilarity measures. D1–D3 are the classical
/// share-weighted spread measures around the Fisher (D1, D2) and Törnqvist
/// (D3) indexes; D4–D6 are the log-index variances reinterpreted as
/// dissimilarity (D4 = Var ln Fisher, D5 = Var ln Walsh, D6 = Var of a
/// chosen log-weighted index).
enum class DissimilarityMeasure { D1, D2, D3, D4, D5, D6 };

inline constexpr std::array<DissimilarityMeasure, 6> kAllDissimilarityMeasures = {
    DissimilarityMeasure::D1, DissimilarityMeasure::D2, DissimilarityMeasure::D3,
    DissimilarityMeasure::D4, DissimilarityMeasure::D5, DissimilarityMeasure::D6,
};

std::string_view measure_name(DissimilarityMeasure measure) noexcept; // "D1".."D6"
std::optional<DissimilarityMeasure> parse_measure(std::string_view text) noexcept;

struct DissimilarityOptions {
    /// Which log-weighted index D6 is the variance of. Must be Tornqvist,
    /// SatoVartia, or ProductDummy.
    IndexMethod d6_method = IndexMethod::Tornqvist;
    WalshNegativePolicy walsh_policy = WalshNegativePolicy::Error;
    bool tolerate_zero_shares = false;
};

/// All six measures for one pair, with per-item contribution vectors whose
/// sums reproduce the measure values exactly (each value *is* the sum of its
/// contribution terms). D4–D6 are nonnegative by construction; D1–D3 can go
/// negative under negative shares and are then listed in negative_warnings
/// rather than clamped.
struct DissimilarityReport {
    std::string target;
    std::string base;
    std::array<double, 6> values{};
    std::array<std::vector<double>, 6> contributions{};
    IndexMethod d6_method{};
    std::vector<DissimilarityMeasure> negative_warnings;

    double value(DissimilarityMeasure measure) const {
        return values[static_cast<std::size_t>(measure)];
    }
    const std::vector<double>& contribution(DissimilarityMeasure measure) const {
        return contributions[static_cast<std::size_t>(measure)];
    }
};

/// Computes all six measures and their contribution breakdowns for one pair.
/// Self-pairs return exact zeros for every measure.
DissimilarityReport dissimilarity_report(const BilateralView& view,
                                         const DissimilarityOptions& options = {});

/// One measure's value only.
double dissimilarity(const BilateralView& view, DissimilarityMeasure measure,
                     const DissimilarityOptions& options = {});

/// D1, D2, D3 (weights ½(s_target + s_base) around Fisher/Fisher/Törnqvist).
std::array<double, 3> diewert_measures(const BilateralView& view);

/// D4, D5, D6 — identical to the corresponding log-index variances.
std::array<double, 3> variance_measures(const BilateralView& view,
                                        const DissimilarityOptions& options = {});

/// Per-item termwise summands of one measure, in item order; sums to the
/// measure's value.
std::vector<double> contribution_table(const BilateralView& view, DissimilarityMeasure measure,
                                       const DissimilarityOptions& options = {});

/// One axiom's outcome in a randomized check.
struct AxiomCheckRow {
    std::string axiom;       ///< stable id, e.g. "identity-zero"
    std::string description; ///< human-readable statement
    double max_violation = 0.0;
};

/// Result of the randomized seven-axiom check of one measure on one dataset:
/// identity D(j,j)=0, nonnegativity, symmetry, proportional prices ⇒ 0,
/// nonproportional prices ⇒ positive, item-permutation invariance, and
/// measurement-unit invariance. Violations beyond `tolerance` flip `passed`.
struct AxiomCheckReport {
    DissimilarityMeasure measure{};
    int trials = 0;
    double tolerance = 0.0;
    std::vector<AxiomCheckRow> rows; ///< always 7 rows, axiom order
    bool passed = true;

    double max_violation() const;
};

/// Randomized axiom check: `trials` draws of pairs/permutations/rescalings
/// from the dataset, deterministic in `seed`.
AxiomCheckReport axiom_check(DissimilarityMeasure measure, const ComparisonDataset& dataset,
                             int trials, std::uint64_t seed, double tolerance = 1e-10,
                             const DissimilarityOptions& options = {});

} // namespace priceidx
