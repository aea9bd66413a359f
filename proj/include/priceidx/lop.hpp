#pragma once

#include <optional>
#include <string>
#include <vector>

#include "priceidx/dataset.hpp"

namespace priceidx {

/// Quantity weighting of the level-form law-of-one-price estimator. Each
/// choice makes the estimated parity coincide with a classical index:
/// base-location quantities give Laspeyres, target-location quantities give
/// Paasche, and the geometric mean of the two gives Walsh.
enum class LopWeighting { BaseQuantity, CurrentQuantity, GeometricQuantity };

/// Weight choice of the log-form estimator. Each choice reproduces one
/// log-weighted index: per-location shares give the bilateral product-dummy
/// (harmonic-weight) index, averaged shares give Törnqvist, and
/// logarithmic-mean shares give Sato-Vartia.
enum class LopLogWeights { ProductDummy, Tornqvist, SatoVartia };

/// A fitted law-of-one-price model for one pair of locations. The model
/// decomposes each price into a location price level, an item effect, and a
/// multiplicative (level form) or additive-in-logs (log form) error:
///
///   level: p_n,target = parity · α_n · (1 + ε_n,target),  p_n,base = α_n · (1 + ε_n,base)
///   log:   ln p_n,target = ln parity + δ_n + ε_n,target,  ln p_n,base = δ_n + ε_n,base
///
/// Exactly one of `weighting` / `log_weights` is set, recording which
/// estimator produced the solution.
struct LopSolution {
    double parity = 1.0;     ///< estimated price level ratio target/base
    double log_parity = 0.0; ///< ln parity
    std::vector<double> item_effects; ///< α_n (level form) or δ_n (log form)
    std::vector<double> residuals;    ///< ε̂, length 2N: target block then base block
    std::optional<LopWeighting> weighting;
    std::optional<LopLogWeights> log_weights;

    std::size_t item_count() const noexcept { return item_effects.size(); }
    double residual_target(std::size_t n) const { return residuals[n]; }
    double residual_base(std::size_t n) const { return residuals[item_count() + n]; }
};

/// Fits the level-form model by weighted moments. BaseQuantity and
/// CurrentQuantity reduce algebraically to closed forms; GeometricQuantity
/// is solved by a damped fixed-point iteration on the parity (tolerance
/// 1e-14 on the relative step, guaranteed contraction). Throws
/// std::domain_error when the weighting is undefined (negative quantity
/// product under GeometricQuantity, or a nonpositive weighted price
/// aggregate).
LopSolution solve_lop_level(const BilateralView& view, LopWeighting weighting);

/// Delta-method variance of ln parity for a level-form solution, computed
/// entirely from the fitted weights, item effects, and residuals. Agrees
/// with the direct variance formula of the matching classical index.
double lop_variance_log(const LopSolution& solution, const BilateralView& view);

/// Fits the log-form model by weighted least squares (closed form). The
/// ProductDummy and SatoVartia choices require strictly positive shares
/// (a zero share is tolerated as weight 0 when tolerate_zero_shares is set);
/// the Tornqvist choice requires only nonzero averaged shares.
LopSolution solve_lop_log(const BilateralView& view, LopLogWeights weights,
                          bool tolerate_zero_shares = false);

/// Variance of ln parity for a log-form solution:
/// Σ ω_n² (ε̂_n,target − ε̂_n,base)². Agrees with the direct log-weighted
/// index variance for the matching scheme.
double lop_log_variance(const LopSolution& solution, const BilateralView& view);

/// Largest absolute stationarity-condition component of a fitted solution
/// (the per-item and global normal equations evaluated at the estimate).
/// Zero up to round-off for closed-form fits; bounded by the iteration
/// tolerance for the fixed-point fit.
double max_moment_residual(const LopSolution& solution, const BilateralView& view);

} // namespace priceidx
