#include "priceidx/variance.hpp"

#include <cmath>
#include <stdexcept>

namespace priceidx {

namespace {

/// The per-item deviations whose squares/products form every
/// Laspeyres/Paasche-family variance:
///   sigma_n = s_n,base   · (π_n / P_L − 1)
///   tau_n   = s_n,target · (P_P / π_n − 1)
struct LpDeviations {
    std::vector<double> sigma;
    std::vector<double> tau;
};

LpDeviations lp_deviations(const BilateralView& view) {
    const double pl = laspeyres(view).value;
    const double pp = paasche(view).value;
    LpDeviations d;
    d.sigma.resize(view.size());
    d.tau.resize(view.size());
    for (std::size_t n = 0; n < view.size(); ++n) {
        d.sigma[n] = view.shares_base[n] * (view.price_ratio[n] / pl - 1.0);
        d.tau[n] = view.shares_target[n] * (pp / view.price_ratio[n] - 1.0);
    }
    return d;
}

} // namespace

double FisherScoreVector::variance() const {
    double sum = 0.0;
    for (const double u : values) sum += u * u;
    return sum;
}

LpVarianceBundle lp_variance_bundle(const BilateralView& view) {
    LpVarianceBundle bundle;
    if (view.self_pair()) return bundle; // identically zero deviations
    const LpDeviations d = lp_deviations(view);
    for (std::size_t n = 0; n < view.size(); ++n) {
        bundle.var_log_laspeyres += d.sigma[n] * d.sigma[n];
        bundle.var_log_inv_paasche += d.tau[n] * d.tau[n];
        bundle.cov_log += d.sigma[n] * d.tau[n];
    }
    return bundle;
}

double var_log_fisher(const BilateralView& view) {
    if (view.self_pair()) return 0.0;
    const LpDeviations d = lp_deviations(view);
    double sum = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        const double diff = d.sigma[n] - d.tau[n];
        sum += diff * diff;
    }
    // Power-of-two scaling: identical bit pattern to summing (diff/2)²,
    // which keeps FisherScoreVector::variance an exact match.
    return 0.25 * sum;
}

double var_fisher_level(const BilateralView& view) {
    const double f = fisher(view).value;
    return var_log_fisher(view) * f * f;
}

double var_log_weighted(const BilateralView& view, const WeightScheme& scheme) {
    if (scheme.values.size() != view.size()) {
        throw std::invalid_argument("weight scheme size does not match view");
    }
    const double log_index = log_weighted_index(view, scheme).log_value;
    double sum = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        const double dev = scheme.values[n] * (std::log(view.price_ratio[n]) - log_index);
        sum += dev * dev;
    }
    return sum;
}

double var_log_walsh(const BilateralView& view, WalshNegativePolicy policy) {
    const WalshDecomposition d = walsh_decomposition(view, policy);
    const double inv_a = 1.0 / d.current_aggregate;
    const double inv_b = 1.0 / d.base_aggregate;
    double sum = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        const double root = std::sqrt(view.price_ratio[n]);
        const double dev = d.weights[n] * (inv_a * root - inv_b / root);
        sum += dev * dev;
    }
    return sum;
}

FisherScoreVector fisher_scores(const BilateralView& view) {
    FisherScoreVector scores;
    scores.target = view.target;
    scores.base = view.base;
    scores.values.assign(view.size(), 0.0);
    if (view.self_pair()) return scores; // exact zeros by construction
    const LpDeviations d = lp_deviations(view);
    for (std::size_t n = 0; n < view.size(); ++n) {
        scores.values[n] = 0.5 * (d.sigma[n] - d.tau[n]);
    }
    return scores;
}

double fisher_score_dot(const FisherScoreVector& a, const FisherScoreVector& b) {
    if (a.values.size() != b.values.size()) {
        throw std::invalid_argument("score vectors come from mismatched item sets");
    }
    double sum = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n) sum += a.values[n] * b.values[n];
    return sum;
}

double cov_log_fisher(const BilateralView& view_a, const BilateralView& view_b) {
    if (view_a.size() != view_b.size() ||
        (view_a.item_labels && view_b.item_labels && view_a.item_labels != view_b.item_labels &&
         *view_a.item_labels != *view_b.item_labels)) {
        throw std::invalid_argument("views come from mismatched item sets");
    }
    return fisher_score_dot(fisher_scores(view_a), fisher_scores(view_b));
}

double var_log_index(const BilateralView& view, IndexMethod method,
                     const BilateralOptions& options) {
    switch (method) {
        case IndexMethod::Laspeyres: return lp_variance_bundle(view).var_log_laspeyres;
        case IndexMethod::Paasche:
            // ln Paasche = −ln(1/Paasche): same variance as the inverse's log.
            return lp_variance_bundle(view).var_log_inv_paasche;
        case IndexMethod::Fisher: return var_log_fisher(view);
        case IndexMethod::Tornqvist:
            return var_log_weighted(
                view, weight_scheme(view, WeightKind::Arithmetic, options.tolerate_zero_shares));
        case IndexMethod::SatoVartia:
            return var_log_weighted(
                view, weight_scheme(view, WeightKind::Logarithmic, options.tolerate_zero_shares));
        case IndexMethod::ProductDummy:
            return var_log_weighted(
                view, weight_scheme(view, WeightKind::Harmonic, options.tolerate_zero_shares));
        case IndexMethod::Walsh: return var_log_walsh(view, options.walsh_policy);
        case IndexMethod::Geks: break;
    }
    throw std::invalid_argument("GEKS is multilateral; use the dataset-level entry point");
}

} // namespace priceidx
