#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "priceidx/dataset.hpp"

namespace priceidx {

/// Share regimes of the random-instance generator. PositiveDirichlet
/// guarantees every share > 0.005 (keeps logarithmic/harmonic weight kernels
/// well-conditioned); WithNegativeHeading flips exactly one item's
/// expenditure negative per location while keeping totals positive.
enum class ShareRegime { PositiveDirichlet, WithNegativeHeading };

/// Parameters of one random dataset draw.
struct InstanceSpec {
    int n_items = 8;        ///< 2..50
    int n_locations = 2;    ///< 2..8
    ShareRegime share_regime = ShareRegime::PositiveDirichlet;
    double price_dispersion = 1.0; ///< log-scale price spread, > 0
    std::uint64_t seed = 0;
};

/// Deterministic random dataset satisfying every ComparisonDataset
/// invariant. Identical spec ⇒ identical dataset.
ComparisonDataset random_instance(const InstanceSpec& spec);

/// Outcome of one named property checked over many random instances.
struct PropertyResult {
    std::string id;          ///< stable kebab-case name
    std::string description; ///< what the property asserts
    double max_violation = 0.0;
    double tolerance = 0.0;
    int trials = 0;
    bool passed = true;
};

struct PropertySuiteReport {
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<PropertyResult> results;
    bool all_passed = true;

    const PropertyResult* find(std::string_view id) const;
};

/// Runs every cross-module invariant — index axioms, variance identities,
/// score antisymmetry, multilateral degeneracies and oracles, dissimilarity
/// axioms, the law-of-one-price route equivalences, and resampling
/// determinism — over `trials` random instances. Deterministic in
/// (seed, trials); trials = 0 yields an empty passing report.
PropertySuiteReport run_all_properties(std::uint64_t seed, int trials);

} // namespace priceidx
