#pragma once

#include <string>
#include <vector>

#include "priceidx/bilateral.hpp"
#include "priceidx/dataset.hpp"

namespace priceidx {

/// The three delta-method moments of the (log Laspeyres, log inverse
/// Paasche) pair, from which the log-Fisher variance composes.
struct LpVarianceBundle {
    double var_log_laspeyres = 0.0;
    double var_log_inv_paasche = 0.0;
    double cov_log = 0.0;

    /// ¼ (VarL + VarInvP − 2 Cov): the composition form of Var(ln Fisher).
    double var_log_fisher_composed() const {
        return 0.25 * (var_log_laspeyres + var_log_inv_paasche - 2.0 * cov_log);
    }
};

/// Per-item scores of the log-Fisher index:
/// u_n = ½ [ s_n,base (π_n / P_L − 1) − s_n,target (P_P / π_n − 1) ].
/// Their squared sum is Var(ln Fisher) exactly, and inner products of score
/// vectors from the same dataset give covariances between log-Fisher indexes
/// of different pairs. Self-pairs have identically zero scores.
struct FisherScoreVector {
    std::string target;
    std::string base;
    std::vector<double> values;

    /// Σ u_n² — bitwise equal to var_log_fisher on the same view.
    double variance() const;
};

/// Variance/covariance of log Laspeyres and log inverse Paasche. Self-pairs
/// return exact zeros.
LpVarianceBundle lp_variance_bundle(const BilateralView& view);

/// Var(ln Fisher) as the direct squared-score sum. Agrees with
/// LpVarianceBundle::var_log_fisher_composed to round-off.
double var_log_fisher(const BilateralView& view);

/// Variance of the Fisher level: Var(ln Fisher) · P_F².
double var_fisher_level(const BilateralView& view);

/// Var(ln P) = Σ_n ω_n² (ln π_n − ln P)² for a log-weighted index.
double var_log_weighted(const BilateralView& view, const WeightScheme& scheme);

/// Var(ln Walsh) = Σ_n ϖ_n² [ (1/P_a) √π_n − (1/P_b) / √π_n ]².
double var_log_walsh(const BilateralView& view,
                     WalshNegativePolicy policy = WalshNegativePolicy::Error);

/// Per-item log-Fisher scores (see FisherScoreVector).
FisherScoreVector fisher_scores(const BilateralView& view);

/// Inner product of two score vectors: Cov(ln Fisher_jk, ln Fisher_lm).
/// Both must come from the same dataset; mismatched item sets are rejected.
double fisher_score_dot(const FisherScoreVector& a, const FisherScoreVector& b);

/// Covariance of the log-Fisher indexes of two pairs of the same dataset.
double cov_log_fisher(const BilateralView& view_a, const BilateralView& view_b);

/// Var(ln P) for any bilateral method tag (Paasche reports the variance of
/// its log, which equals that of its reciprocal's log). Geks is rejected.
double var_log_index(const BilateralView& view, IndexMethod method,
                     const BilateralOptions& options = {});

} // namespace priceidx
