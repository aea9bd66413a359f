#include "priceidx/lop.hpp"

#include <cmath>
#include <stdexcept>

#include "priceidx/bilateral.hpp"

namespace priceidx {

namespace {

/// Quantity weights of the level-form estimator.
std::vector<double> level_weights(const BilateralView& view, LopWeighting weighting) {
    const std::vector<double> q_target = view.quantities_target();
    const std::vector<double> q_base = view.quantities_base();
    std::vector<double> weights(view.size());
    switch (weighting) {
        case LopWeighting::BaseQuantity:
            return q_base;
        case LopWeighting::CurrentQuantity:
            return q_target;
        case LopWeighting::GeometricQuantity:
            for (std::size_t n = 0; n < view.size(); ++n) {
                const double product = q_target[n] * q_base[n];
                if (product < 0.0) {
                    throw std::domain_error(
                        "geometric quantity weight undefined for item '" + view.item_label(n) +
                        "': negative quantity product");
                }
                weights[n] = std::sqrt(product);
            }
            return weights;
    }
    throw std::invalid_argument("unknown level weighting");
}

/// Item effects implied by a parity: α_n = p_n,target/(2·parity) + p_n,base/2.
std::vector<double> item_effects_for(const BilateralView& view, double parity) {
    std::vector<double> alpha(view.size());
    for (std::size_t n = 0; n < view.size(); ++n) {
        alpha[n] = view.prices_target[n] / (2.0 * parity) + 0.5 * view.prices_base[n];
    }
    return alpha;
}

/// Normalized log-form weights ω_n = h_n / Σ h with h_n = ψ_j ψ_k/(ψ_j+ψ_k),
/// reconstructed from the solution's weight choice.
std::vector<double> log_form_weights(const LopSolution& solution, const BilateralView& view) {
    if (!solution.log_weights) {
        throw std::invalid_argument("solution does not come from the log-form estimator");
    }
    std::vector<double> h(view.size(), 0.0);
    for (std::size_t n = 0; n < view.size(); ++n) {
        double psi_target = 0.0;
        double psi_base = 0.0;
        switch (*solution.log_weights) {
            case LopLogWeights::ProductDummy:
                psi_target = view.shares_target[n];
                psi_base = view.shares_base[n];
                break;
            case LopLogWeights::Tornqvist:
                psi_target = psi_base = 0.5 * (view.shares_target[n] + view.shares_base[n]);
                break;
            case LopLogWeights::SatoVartia:
                if (view.shares_target[n] > 0.0 && view.shares_base[n] > 0.0) {
                    psi_target = psi_base =
                        logarithmic_mean(view.shares_target[n], view.shares_base[n]);
                }
                break;
        }
        const double denom = psi_target + psi_base;
        if (denom != 0.0) h[n] = psi_target * psi_base / denom;
    }
    double total = 0.0;
    for (const double v : h) total += v;
    if (!(total > 0.0)) {
        throw std::domain_error("log-form weights undefined: no positive weight mass");
    }
    for (auto& v : h) v /= total;
    return h;
}

/// The per-item ψ pair of the log-form estimator for one item.
void psi_pair(const BilateralView& view, LopLogWeights weights, bool tolerate_zero_shares,
              std::size_t n, double& psi_target, double& psi_base) {
    const double sj = view.shares_target[n];
    const double sk = view.shares_base[n];
    switch (weights) {
        case LopLogWeights::ProductDummy:
        case LopLogWeights::SatoVartia: {
            if (sj < 0.0 || sk < 0.0 || (!tolerate_zero_shares && (sj == 0.0 || sk == 0.0))) {
                throw std::domain_error("nonpositive share for item '" + view.item_label(n) +
                                        "' under log-form weights");
            }
            if (weights == LopLogWeights::ProductDummy) {
                psi_target = sj;
                psi_base = sk;
            } else {
                psi_target = psi_base =
                    (sj > 0.0 && sk > 0.0) ? logarithmic_mean(sj, sk) : 0.0;
            }
            return;
        }
        case LopLogWeights::Tornqvist:
            psi_target = psi_base = 0.5 * (sj + sk);
            return;
    }
    throw std::invalid_argument("unknown log-form weight choice");
}

} // namespace

LopSolution solve_lop_level(const BilateralView& view, LopWeighting weighting) {
    const std::vector<double> weights = level_weights(view, weighting);

    double weighted_target = 0.0; // Σ w p_target
    double weighted_base = 0.0;   // Σ w p_base
    for (std::size_t n = 0; n < view.size(); ++n) {
        weighted_target += weights[n] * view.prices_target[n];
        weighted_base += weights[n] * view.prices_base[n];
    }
    if (!(weighted_target > 0.0) || !(weighted_base > 0.0)) {
        throw std::domain_error("law-of-one-price parity undefined: nonpositive weighted "
                                "price aggregate");
    }

    double parity;
    if (weighting == LopWeighting::GeometricQuantity) {
        // Damped fixed point on the parity: substituting the implied item
        // effects gives 1/P' = ½(1/P) + ½·(Σ w p_base)/(Σ w p_target); the
        // map is a contraction, and the damped step P ← ½(P + P') keeps the
        // iterates monotone.
        parity = 1.0;
        bool converged = false;
        for (int iteration = 0; iteration < 200; ++iteration) {
            double weighted_effects = 0.0; // Σ w α(P)
            for (std::size_t n = 0; n < view.size(); ++n) {
                weighted_effects += weights[n] * (view.prices_target[n] / (2.0 * parity) +
                                                  0.5 * view.prices_base[n]);
            }
            const double next = weighted_target / weighted_effects;
            const double damped = 0.5 * (parity + next);
            const bool done = std::abs(damped - parity) <= 1e-14 * std::abs(damped);
            parity = damped;
            if (done) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw std::domain_error("law-of-one-price fixed point did not converge");
        }
    } else {
        // BaseQuantity / CurrentQuantity reduce algebraically to the ratio
        // of weighted price sums (the quantity form of Laspeyres / Paasche).
        parity = weighted_target / weighted_base;
    }

    LopSolution solution;
    solution.weighting = weighting;
    solution.parity = parity;
    solution.log_parity = std::log(parity);
    solution.item_effects = item_effects_for(view, parity);
    solution.residuals.resize(2 * view.size());
    for (std::size_t n = 0; n < view.size(); ++n) {
        solution.residuals[n] =
            view.prices_target[n] / (parity * solution.item_effects[n]) - 1.0;
        solution.residuals[view.size() + n] =
            view.prices_base[n] / solution.item_effects[n] - 1.0;
    }
    return solution;
}

double lop_variance_log(const LopSolution& solution, const BilateralView& view) {
    if (!solution.weighting) {
        throw std::invalid_argument("solution does not come from the level-form estimator");
    }
    if (solution.item_count() != view.size()) {
        throw std::invalid_argument("solution size does not match view");
    }
    const std::vector<double> weights = level_weights(view, *solution.weighting);
    double weighted_target = 0.0;
    double weighted_base = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        weighted_target += weights[n] * view.prices_target[n];
        weighted_base += weights[n] * view.prices_base[n];
    }
    double sum = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        const double alpha = solution.item_effects[n];
        const double term =
            weights[n] * solution.parity * alpha * solution.residual_target(n) / weighted_target -
            weights[n] * alpha * solution.residual_base(n) / weighted_base;
        sum += term * term;
    }
    return sum;
}

LopSolution solve_lop_log(const BilateralView& view, LopLogWeights weights,
                          bool tolerate_zero_shares) {
    const std::size_t n_items = view.size();
    std::vector<double> psi_target(n_items);
    std::vector<double> psi_base(n_items);
    std::vector<double> h(n_items, 0.0);
    double h_total = 0.0;
    for (std::size_t n = 0; n < n_items; ++n) {
        psi_pair(view, weights, tolerate_zero_shares, n, psi_target[n], psi_base[n]);
        const double denom = psi_target[n] + psi_base[n];
        if (denom == 0.0) {
            if (weights == LopLogWeights::Tornqvist && !tolerate_zero_shares) {
                throw std::domain_error("zero averaged share for item '" + view.item_label(n) +
                                        "' under log-form weights");
            }
            continue;
        }
        h[n] = psi_target[n] * psi_base[n] / denom;
        h_total += h[n];
    }
    if (!(h_total > 0.0)) {
        throw std::domain_error("log-form weights undefined: no positive weight mass");
    }

    double log_parity = 0.0;
    for (std::size_t n = 0; n < n_items; ++n) {
        log_parity += h[n] * std::log(view.price_ratio[n]);
    }
    log_parity /= h_total;

    LopSolution solution;
    solution.log_weights = weights;
    solution.log_parity = log_parity;
    solution.parity = std::exp(log_parity);
    solution.item_effects.resize(n_items);
    solution.residuals.resize(2 * n_items);
    for (std::size_t n = 0; n < n_items; ++n) {
        const double log_target = std::log(view.prices_target[n]);
        const double log_base = std::log(view.prices_base[n]);
        const double denom = psi_target[n] + psi_base[n];
        // With both ψ's zero the item carries no information; its effect is
        // the unweighted average of the two implied values.
        solution.item_effects[n] =
            denom != 0.0
                ? (psi_target[n] * (log_target - log_parity) + psi_base[n] * log_base) / denom
                : 0.5 * ((log_target - log_parity) + log_base);
        solution.residuals[n] = log_target - log_parity - solution.item_effects[n];
        solution.residuals[n_items + n] = log_base - solution.item_effects[n];
    }
    return solution;
}

double lop_log_variance(const LopSolution& solution, const BilateralView& view) {
    if (solution.item_count() != view.size()) {
        throw std::invalid_argument("solution size does not match view");
    }
    const std::vector<double> omega = log_form_weights(solution, view);
    double sum = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        const double dev =
            omega[n] * (solution.residual_target(n) - solution.residual_base(n));
        sum += dev * dev;
    }
    return sum;
}

double max_moment_residual(const LopSolution& solution, const BilateralView& view) {
    if (solution.item_count() != view.size()) {
        throw std::invalid_argument("solution size does not match view");
    }
    double worst = 0.0;
    if (solution.weighting) {
        const std::vector<double> weights = level_weights(view, *solution.weighting);
        double global = 0.0; // Σ w α ε_target: stationarity in the parity
        for (std::size_t n = 0; n < view.size(); ++n) {
            const double alpha = solution.item_effects[n];
            global += weights[n] * alpha * solution.residual_target(n);
            // Per-item stationarity: w α (ε_target + ε_base) / 2.
            const double item = 0.5 * weights[n] * alpha *
                                (solution.residual_target(n) + solution.residual_base(n));
            worst = std::max(worst, std::abs(item));
        }
        worst = std::max(worst, std::abs(global));
        return worst;
    }
    if (solution.log_weights) {
        double global = 0.0; // Σ ψ_target ε_target: stationarity in ln parity
        for (std::size_t n = 0; n < view.size(); ++n) {
            double psi_target = 0.0;
            double psi_base = 0.0;
            psi_pair(view, *solution.log_weights, /*tolerate_zero_shares=*/true, n, psi_target,
                     psi_base);
            global += psi_target * solution.residual_target(n);
            const double item = psi_target * solution.residual_target(n) +
                                psi_base * solution.residual_base(n);
            worst = std::max(worst, std::abs(item));
        }
        worst = std::max(worst, std::abs(global));
        return worst;
    }
    throw std::invalid_argument("solution carries no estimator tag");
}

} // namespace priceidx
