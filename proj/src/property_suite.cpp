#include "priceidx/property_suite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "priceidx/bilateral.hpp"
#include "priceidx/dissimilarity.hpp"
#include "priceidx/geks.hpp"
#include "priceidx/lop.hpp"
#include "priceidx/parallel.hpp"
#include "priceidx/resampling.hpp"
#include "priceidx/rng.hpp"
#include "priceidx/variance.hpp"

namespace priceidx {

namespace {

struct PropertyDef {
    const char* id;
    const char* description;
    double tolerance;
    bool informational = false; ///< reported with its observed value, never fails the suite
};

// Per-trial properties, evaluated on a fresh random instance each trial.
enum PerTrialProperty : std::size_t {
    kIdentitySelfPair = 0,
    kTimeReversal,
    kLaspeyresPaascheReciprocity,
    kFisherQuantityReversal,
    kProportionality,
    kUnitInvariance,
    kMeanValueBounds,
    kFisherVarianceComposition,
    kFisherVarianceSymmetry,
    kFisherScoreAntisymmetry,
    kQuantityReversalVarianceD4,
    kQuantityReversalD5Observed,
    kVarianceUnitInvariance,
    kVarianceNonnegativity,
    kCovariancePsd,
    kGeksTransitivity,
    kGeksBaseChange,
    kGeksM2Degeneracy,
    kGeksVarianceDenseOracle,
    kDissimilaritySymmetry,
    kDissimilarityVarianceIdentity,
    kDissimilarityContributionSum,
    kDissimilarityAxioms,
    kDissimilarityMonotoneSanity,
    kLopLevelRoute,
    kLopLogRoute,
    kLopResidualAntisymmetry,
    kLopItemEffectClosedForm,
    kLopMomentConditions,
    kPerTrialCount,
};

constexpr std::array<PropertyDef, kPerTrialCount> kPerTrialDefs{{
    {"bilateral-identity-self-pair",
     "Every bilateral index equals 1 when a location is compared with itself.", 1e-14},
    {"bilateral-time-reversal",
     "Reversing target and base inverts Fisher, Tornqvist, Sato-Vartia, product-dummy, "
     "and Walsh: P(j,k)*P(k,j) = 1.",
     1e-12},
    {"laspeyres-paasche-reciprocity",
     "Laspeyres of (j,k) is the reciprocal of Paasche of (k,j).", 1e-12},
    {"fisher-quantity-reversal",
     "Exchanging the two locations' quantity vectors leaves the Fisher index unchanged.",
     1e-12},
    {"proportionality",
     "When target prices are a uniform multiple of base prices, every index equals that "
     "multiple.",
     1e-12},
    {"unit-invariance",
     "Rescaling an item's price row in both locations (expenditures fixed) leaves every "
     "index unchanged.",
     1e-12},
    {"mean-value-bounds",
     "Every index lies between the smallest and largest item price ratio when shares are "
     "positive.",
     1e-12},
    {"fisher-variance-composition-equivalence",
     "Composing the Laspeyres/inverse-Paasche variance bundle reproduces the directly "
     "summed Fisher log variance.",
     1e-12},
    {"fisher-variance-symmetry",
     "The Fisher log variance is the same in both comparison directions.", 1e-12},
    {"fisher-score-antisymmetry",
     "Per-item Fisher scores flip sign when target and base are exchanged.", 1e-13},
    {"quantity-reversal-variance-d4",
     "Exchanging quantity vectors leaves the Fisher log variance (and measure D4) "
     "unchanged.",
     1e-12},
    {"quantity-reversal-d5-observed",
     "Observed effect of exchanging quantity vectors on measure D5 (reported, not "
     "asserted).",
     1e-10, /*informational=*/true},
    {"variance-unit-invariance",
     "Price-row rescaling with fixed expenditures leaves every variance output unchanged.",
     1e-12},
    {"variance-nonnegativity",
     "Every variance output is nonnegative (sums of squares).", 0.0},
    {"covariance-psd",
     "Pairwise Fisher log-index covariance matrices are positive semidefinite.", 1e-10},
    {"geks-transitivity",
     "Differences of multilateral log indexes chain consistently across any three "
     "locations.",
     1e-13},
    {"geks-base-change-consistency",
     "Changing the multilateral base shifts all log indexes by a constant.", 1e-12},
    {"geks-m2-degeneracy",
     "With two locations the multilateral index and variance equal bilateral Fisher's.",
     1e-12},
    {"geks-variance-dense-oracle",
     "Multilateral variance from score-sum assembly matches the dense pairwise-covariance "
     "quadratic form.",
     1e-10},
    {"dissimilarity-symmetry",
     "All six dissimilarity measures are symmetric in target and base.", 1e-12},
    {"dissimilarity-variance-identity",
     "D4, D5, and D6 coincide exactly with the Fisher, Walsh, and log-weighted variances.",
     0.0},
    {"dissimilarity-contribution-sum",
     "Per-item contributions sum exactly to each measure's value.", 0.0},
    {"dissimilarity-axioms",
     "Randomized check of the seven dissimilarity axioms for all six measures.", 1e-10},
    {"dissimilarity-monotone-sanity",
     "Each measure is zero at proportional prices and positive once one item's price is "
     "perturbed.",
     1e-12},
    {"lop-level-route-equivalence",
     "Level-form common-price estimators reproduce Laspeyres, Paasche, and Walsh values "
     "and variances.",
     1e-10},
    {"lop-log-route-equivalence",
     "Log-form common-price estimators reproduce product-dummy, Tornqvist, and "
     "Sato-Vartia values and variances.",
     1e-10},
    {"lop-residual-antisymmetry",
     "Level-form residuals of the two locations are exact negatives of each other.",
     1e-12},
    {"lop-item-effect-closed-form",
     "Recovered item effects satisfy the closed form alpha = p_target/(2P) + p_base/2.",
     0.0},
    {"lop-moment-conditions",
     "Estimating-equation residuals vanish at every solution.", 1e-10},
}};

// One-shot properties on fixed data (bootstrap and generator behavior).
enum FixedProperty : std::size_t {
    kBootstrapDeterminism = 0,
    kBootstrapConstantZero,
    kBootstrapStability,
    kBootstrapFormulaAgreement,
    kGeneratorZeroNoise,
    kFixedCount,
};

constexpr std::array<PropertyDef, kFixedCount> kFixedDefs{{
    {"bootstrap-determinism",
     "Bootstrap results are byte-identical across thread counts for a fixed seed.", 0.0},
    {"bootstrap-constant-statistic-zero",
     "The bootstrap SE of a constant statistic is exactly zero.", 0.0},
    {"bootstrap-replication-stability",
     "Doubling bootstrap replications moves the SE by less than 5%.", 0.05},
    {"bootstrap-formula-agreement",
     "Bootstrap SE agrees with the delta-method SE within a 25% band.", 0.25},
    {"generator-zero-noise-identity",
     "With zero error spread the generator's indexes equal the true parity and interval "
     "coverage is exactly 1.",
     1e-12},
}};

/// |a−b| relative to the larger magnitude (guarded for near-zero pairs).
double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-15});
}

/// |a−b| relative to max(1, magnitudes) — for log-scale values, whose natural
/// scale is O(1) and which may legitimately sit near 0.
double log_scale_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

void raise(double& slot, double violation) { slot = std::max(slot, violation); }

/// Smallest eigenvalue of a symmetric n×n matrix (row-major), by cyclic
/// Jacobi rotations. Sizes here are tiny (≤ 20), where Jacobi is exact to
/// round-off and needs no pivoting or balancing.
double min_eigenvalue_symmetric(std::vector<double> a, std::size_t n) {
    if (n == 0) return 0.0;
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            scale += a[i * n + i] * a[i * n + i];
            for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        }
        if (off <= 1e-32 * std::max(scale, 1e-300)) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[r * n + p];
                    const double arq = a[r * n + q];
                    a[r * n + p] = a[p * n + r] = c * arp - s * arq;
                    a[r * n + q] = a[q * n + r] = s * arp + c * arq;
                }
                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = a[q * n + p] = 0.0;
            }
        }
    }
    double smallest = a[0];
    for (std::size_t i = 1; i < n; ++i) smallest = std::min(smallest, a[i * n + i]);
    return smallest;
}

std::array<double, kPerTrialCount> run_trial(std::uint64_t master_seed, int trial) {
    std::array<double, kPerTrialCount> v{};
    rng::Sampler sampler =
        rng::Sampler::substream(master_seed, static_cast<std::uint64_t>(trial));

    InstanceSpec spec;
    spec.n_items = 2 + static_cast<int>(sampler.uniform_index(49));    // 2..50
    spec.n_locations = 2 + static_cast<int>(sampler.uniform_index(7)); // 2..8
    spec.share_regime = ShareRegime::PositiveDirichlet;
    spec.price_dispersion = sampler.uniform(0.25, 1.25);
    spec.seed = sampler.next_u64();
    const ComparisonDataset ds = random_instance(spec);

    const std::size_t n_locations = ds.location_count();
    const std::size_t n_items = ds.item_count();
    const std::size_t j = sampler.uniform_index(n_locations);
    std::size_t k = sampler.uniform_index(n_locations - 1);
    if (k >= j) ++k;

    const BilateralView vjk = ds.bilateral_view(j, k);
    const BilateralView vkj = ds.bilateral_view(k, j);
    const BilateralView vjj = ds.bilateral_view(j, j);
    const BilateralOptions options{};

    // --- bilateral index axioms -------------------------------------------
    for (const IndexMethod method : kBilateralMethods) {
        raise(v[kIdentitySelfPair], std::abs(bilateral_index(vjj, method, options).value - 1.0));
    }

    for (const IndexMethod method :
         {IndexMethod::Fisher, IndexMethod::Tornqvist, IndexMethod::SatoVartia,
          IndexMethod::ProductDummy, IndexMethod::Walsh}) {
        const double forward = bilateral_index(vjk, method, options).value;
        const double backward = bilateral_index(vkj, method, options).value;
        raise(v[kTimeReversal], std::abs(forward * backward - 1.0));
    }
    raise(v[kLaspeyresPaascheReciprocity],
          std::abs(laspeyres(vjk).value * paasche(vkj).value - 1.0));

    const ComparisonDataset ds_swapped = ds.with_quantities_swapped(j, k);
    const BilateralView vjk_swapped = ds_swapped.bilateral_view(j, k);
    raise(v[kFisherQuantityReversal], rel_gap(fisher(vjk).value, fisher(vjk_swapped).value));

    const double lambda = std::exp(sampler.uniform(-0.7, 0.7));
    std::vector<double> proportional_column(n_items);
    for (std::size_t n = 0; n < n_items; ++n) proportional_column[n] = lambda * ds.price(n, k);
    const ComparisonDataset ds_proportional = ds.with_location_prices(j, proportional_column);
    const BilateralView vjk_proportional = ds_proportional.bilateral_view(j, k);
    for (const IndexMethod method : kBilateralMethods) {
        raise(v[kProportionality],
              rel_gap(bilateral_index(vjk_proportional, method, options).value, lambda));
    }

    std::vector<double> unit_factors(n_items);
    for (std::size_t n = 0; n < n_items; ++n) {
        unit_factors[n] = std::exp(sampler.uniform(-1.1, 1.1));
    }
    const ComparisonDataset ds_rescaled = ds.with_item_prices_rescaled(unit_factors);
    const BilateralView vjk_rescaled = ds_rescaled.bilateral_view(j, k);
    for (const IndexMethod method : kBilateralMethods) {
        raise(v[kUnitInvariance], rel_gap(bilateral_index(vjk, method, options).value,
                                          bilateral_index(vjk_rescaled, method, options).value));
    }

    double ratio_min = vjk.price_ratio[0];
    double ratio_max = vjk.price_ratio[0];
    for (const double ratio : vjk.price_ratio) {
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
    }
    const double ratio_scale = std::max(1.0, ratio_max);
    for (const IndexMethod method : kBilateralMethods) {
        const double value = bilateral_index(vjk, method, options).value;
        raise(v[kMeanValueBounds],
              std::max({0.0, (ratio_min - value) / ratio_scale,
                        (value - ratio_max) / ratio_scale}));
    }

    // --- variance identities ----------------------------------------------
    const LpVarianceBundle bundle = lp_variance_bundle(vjk);
    const double var_fisher_forward = var_log_fisher(vjk);
    raise(v[kFisherVarianceComposition],
          rel_gap(bundle.var_log_fisher_composed(), var_fisher_forward));
    raise(v[kFisherVarianceSymmetry], rel_gap(var_fisher_forward, var_log_fisher(vkj)));

    const FisherScoreVector scores_forward = fisher_scores(vjk);
    const FisherScoreVector scores_backward = fisher_scores(vkj);
    double score_scale = 1.0;
    for (const double u : scores_forward.values) score_scale = std::max(score_scale, std::abs(u));
    for (std::size_t n = 0; n < n_items; ++n) {
        raise(v[kFisherScoreAntisymmetry],
              std::abs(scores_forward.values[n] + scores_backward.values[n]) / score_scale);
    }

    raise(v[kQuantityReversalVarianceD4],
          rel_gap(var_fisher_forward, var_log_fisher(vjk_swapped)));

    const DissimilarityOptions dissim_options{};
    raise(v[kQuantityReversalD5Observed],
          rel_gap(dissimilarity(vjk, DissimilarityMeasure::D5, dissim_options),
                  dissimilarity(vjk_swapped, DissimilarityMeasure::D5, dissim_options)));

    const auto variance_outputs = [&](const BilateralView& view) {
        const LpVarianceBundle b = lp_variance_bundle(view);
        return std::array<double, 8>{
            b.var_log_laspeyres,
            b.var_log_inv_paasche,
            var_log_fisher(view),
            var_fisher_level(view),
            var_log_weighted(view, weight_scheme(view, WeightKind::Arithmetic)),
            var_log_weighted(view, weight_scheme(view, WeightKind::Logarithmic)),
            var_log_weighted(view, weight_scheme(view, WeightKind::Harmonic)),
            var_log_walsh(view, WalshNegativePolicy::Error),
        };
    };
    const std::array<double, 8> var_plain = variance_outputs(vjk);
    const std::array<double, 8> var_rescaled = variance_outputs(vjk_rescaled);
    for (std::size_t i = 0; i < var_plain.size(); ++i) {
        raise(v[kVarianceUnitInvariance], rel_gap(var_plain[i], var_rescaled[i]));
        raise(v[kVarianceNonnegativity], std::max(0.0, -var_plain[i]));
    }

    // --- covariance PSD on a location subset --------------------------------
    {
        const std::size_t subset_size = std::min<std::size_t>(n_locations, 5);
        std::vector<std::size_t> order(n_locations);
        for (std::size_t i = 0; i < n_locations; ++i) order[i] = i;
        for (std::size_t i = 0; i < subset_size; ++i) {
            std::swap(order[i], order[i + sampler.uniform_index(n_locations - i)]);
        }
        std::vector<FisherScoreVector> pair_scores;
        pair_scores.reserve(subset_size * (subset_size - 1));
        for (std::size_t a = 0; a < subset_size; ++a) {
            for (std::size_t c = 0; c < subset_size; ++c) {
                if (a == c) continue;
                pair_scores.push_back(fisher_scores(ds.bilateral_view(order[a], order[c])));
            }
        }
        const std::size_t dim = pair_scores.size();
        std::vector<double> cov(dim * dim);
        double trace = 0.0;
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = r; c < dim; ++c) {
                const double entry = fisher_score_dot(pair_scores[r], pair_scores[c]);
                cov[r * dim + c] = cov[c * dim + r] = entry;
                if (r == c) trace += entry;
            }
        }
        const double min_eig = min_eigenvalue_symmetric(std::move(cov), dim);
        raise(v[kCovariancePsd], std::max(0.0, -min_eig) / std::max(trace, 1e-300));
    }

    // --- multilateral properties --------------------------------------------
    const std::size_t base1 = sampler.uniform_index(n_locations);
    const std::size_t base2 = (base1 + 1 + sampler.uniform_index(n_locations - 1)) % n_locations;
    const GeksResult geks1 = geks_with_variance(ds, ds.locations()[base1]);
    const GeksResult geks2 = geks_indexes(ds, ds.locations()[base2]);

    for (std::size_t a = 0; a < n_locations; ++a) {
        for (std::size_t b = 0; b < n_locations; ++b) {
            raise(v[kGeksBaseChange],
                  std::abs((geks1.log_index[a] - geks1.log_index[b]) -
                           (geks2.log_index[a] - geks2.log_index[b])));
            for (std::size_t c = 0; c < n_locations; ++c) {
                raise(v[kGeksTransitivity],
                      std::abs((geks1.log_index[a] - geks1.log_index[b]) +
                               (geks1.log_index[b] - geks1.log_index[c]) -
                               (geks1.log_index[a] - geks1.log_index[c])));
            }
        }
    }
    for (const double variance : geks1.var_log) {
        raise(v[kVarianceNonnegativity], std::max(0.0, -variance));
    }

    // Dense-covariance oracle for the variance of one non-base location.
    {
        const std::size_t target = (j != base1) ? j : k;
        std::vector<FisherScoreVector> pair_scores;
        std::vector<double> selector;
        for (std::size_t c = 0; c < n_locations; ++c) {
            if (c == target) continue;
            pair_scores.push_back(fisher_scores(ds.bilateral_view(target, c)));
            selector.push_back(1.0);
        }
        for (std::size_t c = 0; c < n_locations; ++c) {
            if (c == base1) continue;
            pair_scores.push_back(fisher_scores(ds.bilateral_view(base1, c)));
            selector.push_back(-1.0);
        }
        double quadratic_form = 0.0;
        for (std::size_t r = 0; r < pair_scores.size(); ++r) {
            for (std::size_t c = 0; c < pair_scores.size(); ++c) {
                quadratic_form += selector[r] * selector[c] *
                                  fisher_score_dot(pair_scores[r], pair_scores[c]);
            }
        }
        const double dense = quadratic_form /
                             (static_cast<double>(n_locations) * static_cast<double>(n_locations));
        const double assembled = geks1.var_log_of(ds.locations()[target]).value();
        raise(v[kGeksVarianceDenseOracle],
              std::abs(dense - assembled) / std::max({dense, assembled, 1e-12}));
    }

    // Two-location degeneracy: multilateral == bilateral Fisher.
    {
        InstanceSpec spec2;
        spec2.n_items = 2 + static_cast<int>(sampler.uniform_index(49));
        spec2.n_locations = 2;
        spec2.share_regime = ShareRegime::PositiveDirichlet;
        spec2.price_dispersion = sampler.uniform(0.25, 1.25);
        spec2.seed = sampler.next_u64();
        const ComparisonDataset ds2 = random_instance(spec2);
        const GeksResult geks_m2 = geks_with_variance(ds2, ds2.locations()[1]);
        const BilateralView v01 = ds2.bilateral_view(std::size_t{0}, std::size_t{1});
        const IndexEstimate fisher01 = fisher(v01);
        raise(v[kGeksM2Degeneracy],
              rel_gap(geks_m2.value_of(ds2.locations()[0]), fisher01.value));
        raise(v[kGeksM2Degeneracy],
              rel_gap(geks_m2.var_log_of(ds2.locations()[0]).value(), var_log_fisher(v01)));
    }

    // --- dissimilarity properties -------------------------------------------
    const DissimilarityReport report_jk = dissimilarity_report(vjk, dissim_options);
    const DissimilarityReport report_kj = dissimilarity_report(vkj, dissim_options);
    for (const DissimilarityMeasure measure : kAllDissimilarityMeasures) {
        raise(v[kDissimilaritySymmetry],
              rel_gap(report_jk.value(measure), report_kj.value(measure)));
        const std::vector<double>& contributions = report_jk.contribution(measure);
        double contribution_sum = 0.0;
        for (const double term : contributions) contribution_sum += term;
        raise(v[kDissimilarityContributionSum],
              std::abs(contribution_sum - report_jk.value(measure)));
    }
    raise(v[kDissimilarityVarianceIdentity],
          std::abs(report_jk.value(DissimilarityMeasure::D4) - var_fisher_forward));
    raise(v[kDissimilarityVarianceIdentity],
          std::abs(report_jk.value(DissimilarityMeasure::D5) -
                   var_log_walsh(vjk, WalshNegativePolicy::Error)));
    raise(v[kDissimilarityVarianceIdentity],
          std::abs(report_jk.value(DissimilarityMeasure::D6) -
                   var_log_weighted(vjk, weight_scheme(vjk, WeightKind::Arithmetic))));

    for (const DissimilarityMeasure measure : kAllDissimilarityMeasures) {
        const AxiomCheckReport axioms =
            axiom_check(measure, ds, /*trials=*/6, sampler.next_u64());
        raise(v[kDissimilarityAxioms], axioms.max_violation());
    }

    // Monotone sanity: zero at proportionality, positive off it.
    {
        for (const DissimilarityMeasure measure : kAllDissimilarityMeasures) {
            raise(v[kDissimilarityMonotoneSanity],
                  std::abs(dissimilarity(vjk_proportional, measure, dissim_options)));
        }
        const std::size_t perturbed_item = sampler.uniform_index(n_items);
        for (const double t : {-0.4, 0.25}) {
            std::vector<double> perturbed_column = proportional_column;
            perturbed_column[perturbed_item] *= 1.0 + t;
            const ComparisonDataset ds_perturbed =
                ds_proportional.with_location_prices(j, perturbed_column);
            const BilateralView view = ds_perturbed.bilateral_view(j, k);
            for (const DissimilarityMeasure measure : kAllDissimilarityMeasures) {
                if (!(dissimilarity(view, measure, dissim_options) > 0.0)) {
                    raise(v[kDissimilarityMonotoneSanity], 1.0);
                }
            }
        }
    }

    // --- law-of-one-price route equivalences ---------------------------------
    {
        const LopSolution level_base = solve_lop_level(vjk, LopWeighting::BaseQuantity);
        const LopSolution level_current = solve_lop_level(vjk, LopWeighting::CurrentQuantity);
        const LopSolution level_geometric =
            solve_lop_level(vjk, LopWeighting::GeometricQuantity);

        raise(v[kLopLevelRoute], rel_gap(level_base.parity, laspeyres(vjk).value));
        raise(v[kLopLevelRoute], rel_gap(level_current.parity, paasche(vjk).value));
        raise(v[kLopLevelRoute],
              rel_gap(level_geometric.parity, walsh(vjk, WalshNegativePolicy::Error).value));
        raise(v[kLopLevelRoute],
              rel_gap(lop_variance_log(level_base, vjk), bundle.var_log_laspeyres));
        raise(v[kLopLevelRoute],
              rel_gap(lop_variance_log(level_current, vjk), bundle.var_log_inv_paasche));
        raise(v[kLopLevelRoute],
              rel_gap(lop_variance_log(level_geometric, vjk),
                      var_log_walsh(vjk, WalshNegativePolicy::Error)));

        const LopSolution log_pd = solve_lop_log(vjk, LopLogWeights::ProductDummy);
        const LopSolution log_tornqvist = solve_lop_log(vjk, LopLogWeights::Tornqvist);
        const LopSolution log_sv = solve_lop_log(vjk, LopLogWeights::SatoVartia);
        const WeightScheme scheme_harmonic = weight_scheme(vjk, WeightKind::Harmonic);
        const WeightScheme scheme_arithmetic = weight_scheme(vjk, WeightKind::Arithmetic);
        const WeightScheme scheme_logarithmic = weight_scheme(vjk, WeightKind::Logarithmic);

        raise(v[kLopLogRoute], log_scale_gap(log_pd.log_parity,
                                             log_weighted_index(vjk, scheme_harmonic).log_value));
        raise(v[kLopLogRoute],
              log_scale_gap(log_tornqvist.log_parity,
                            log_weighted_index(vjk, scheme_arithmetic).log_value));
        raise(v[kLopLogRoute], log_scale_gap(log_sv.log_parity,
                                             log_weighted_index(vjk, scheme_logarithmic).log_value));
        raise(v[kLopLogRoute],
              rel_gap(lop_log_variance(log_pd, vjk), var_log_weighted(vjk, scheme_harmonic)));
        raise(v[kLopLogRoute], rel_gap(lop_log_variance(log_tornqvist, vjk),
                                       var_log_weighted(vjk, scheme_arithmetic)));
        raise(v[kLopLogRoute],
              rel_gap(lop_log_variance(log_sv, vjk), var_log_weighted(vjk, scheme_logarithmic)));

        for (const LopSolution* solution : {&level_base, &level_current, &level_geometric}) {
            for (std::size_t n = 0; n < n_items; ++n) {
                raise(v[kLopResidualAntisymmetry],
                      std::abs(solution->residual_target(n) + solution->residual_base(n)));
            }
        }
        for (std::size_t n = 0; n < n_items; ++n) {
            const double closed_form = vjk.prices_target[n] / (2.0 * level_base.parity) +
                                       0.5 * vjk.prices_base[n];
            raise(v[kLopItemEffectClosedForm],
                  std::abs(level_base.item_effects[n] - closed_form));
        }
        for (const LopSolution* solution :
             {&level_base, &level_current, &level_geometric, &log_pd, &log_tornqvist, &log_sv}) {
            raise(v[kLopMomentConditions], max_moment_residual(*solution, vjk));
        }
    }

    return v;
}

std::array<double, kFixedCount> run_fixed(std::uint64_t master_seed) {
    std::array<double, kFixedCount> v{};
    // Streams far above any plausible trial index, so fixed-data draws never
    // collide with per-trial substreams.
    const std::uint64_t stream_base = 0xFFFFFFFF00000000ULL;
    rng::Sampler sampler = rng::Sampler::substream(master_seed, stream_base);

    // Bootstrap determinism across thread counts, and the constant statistic.
    {
        InstanceSpec spec;
        spec.n_items = 12;
        spec.n_locations = 3;
        spec.share_regime = ShareRegime::PositiveDirichlet;
        spec.price_dispersion = 0.8;
        spec.seed = sampler.next_u64();
        const ComparisonDataset ds = random_instance(spec);

        BootstrapConfig config;
        config.replications = 80;
        config.seed = sampler.next_u64();
        config.statistic.method = IndexMethod::Fisher;
        config.statistic.target = ds.locations()[0];
        config.statistic.base = ds.locations()[2];
        config.threads = 1;
        const BootstrapResult serial = bootstrap_se(ds, config);
        config.threads = 4;
        const BootstrapResult four_threads = bootstrap_se(ds, config);
        config.threads = 0;
        const BootstrapResult hardware = bootstrap_se(ds, config);
        raise(v[kBootstrapDeterminism], std::abs(serial.se_log - four_threads.se_log));
        raise(v[kBootstrapDeterminism], std::abs(serial.se_log - hardware.se_log));

        BootstrapConfig geks_config = config;
        geks_config.replications = 40;
        geks_config.statistic.method = IndexMethod::Geks;
        geks_config.threads = 1;
        const BootstrapResult geks_serial = bootstrap_se(ds, geks_config);
        geks_config.threads = 4;
        const BootstrapResult geks_parallel = bootstrap_se(ds, geks_config);
        raise(v[kBootstrapDeterminism], std::abs(geks_serial.se_log - geks_parallel.se_log));

        // Constant statistic: equal expenditures make every resampled share
        // exactly 1/N (the same bits in every replicate), and a power-of-two
        // price ratio is formed exactly, so every replicate reproduces the
        // statistic bit for bit and the bootstrap SD must be exactly zero.
        {
            const std::size_t n = 16;
            std::vector<std::string> items;
            std::vector<double> prices;
            std::vector<double> expenditures;
            for (std::size_t i = 0; i < n; ++i) {
                items.push_back("C" + std::to_string(i + 1));
                const double base_price = std::exp(sampler.uniform(-0.9, 0.9));
                prices.push_back(2.0 * base_price);
                prices.push_back(base_price);
                expenditures.push_back(1.0);
                expenditures.push_back(1.0);
            }
            const ComparisonDataset proportional(std::move(items), {"P", "Q"},
                                                 std::move(prices), std::move(expenditures));
            BootstrapConfig constant_config;
            constant_config.replications = 60;
            constant_config.seed = sampler.next_u64();
            constant_config.threads = 0;
            constant_config.statistic.target = "P";
            constant_config.statistic.base = "Q";
            for (const IndexMethod method :
                 {IndexMethod::Fisher, IndexMethod::Tornqvist, IndexMethod::Walsh}) {
                constant_config.statistic.method = method;
                const BootstrapResult constant = bootstrap_se(proportional, constant_config);
                raise(v[kBootstrapConstantZero], std::abs(constant.se_log));
            }
        }
    }

    // Stability in the replication count, and agreement with the formula SE.
    {
        LopGeneratorConfig generator;
        generator.n_items = 80;
        generator.log_level_target = 0.15;
        generator.log_level_base = 0.0;
        generator.item_effect_spread = 1.0;
        generator.errors.sigma_target = {0.25};
        generator.errors.sigma_base = {0.25};
        generator.errors.covariance = {0.0};
        generator.dirichlet_concentration = 2.0;
        generator.seed = sampler.next_u64();
        const GeneratedLopDataset generated = generate_lop_dataset(generator);

        BootstrapConfig config;
        config.replications = 2000;
        config.seed = sampler.next_u64();
        config.statistic.method = IndexMethod::Fisher;
        config.statistic.target = generator.target_label;
        config.statistic.base = generator.base_label;
        config.threads = 0;
        const BootstrapResult r2000 = bootstrap_se(generated.dataset, config);
        config.replications = 4000;
        const BootstrapResult r4000 = bootstrap_se(generated.dataset, config);
        raise(v[kBootstrapStability],
              std::abs(r2000.se_log - r4000.se_log) / std::max(r4000.se_log, 1e-300));
        raise(v[kBootstrapFormulaAgreement],
              std::abs(r2000.se_log - r2000.delta_se_log) /
                  std::max(r2000.delta_se_log, 1e-300));
    }

    // Zero-noise generator: every index equals the true parity; coverage 1.
    {
        LopGeneratorConfig generator;
        generator.n_items = 40;
        generator.log_level_target = 0.3;
        generator.log_level_base = 0.1;
        generator.item_effect_spread = 1.0;
        generator.seed = sampler.next_u64();
        const GeneratedLopDataset generated = generate_lop_dataset(generator);
        const BilateralView view = generated.dataset.bilateral_view(
            generator.target_label, generator.base_label);
        for (const IndexMethod method : kBilateralMethods) {
            raise(v[kGeneratorZeroNoise],
                  log_scale_gap(bilateral_index(view, method, BilateralOptions{}).log_value,
                                generated.true_log_parity));
        }

        CoverageConfig coverage_config;
        coverage_config.generator = generator;
        coverage_config.method = IndexMethod::Tornqvist;
        coverage_config.replications = 40;
        coverage_config.seed = sampler.next_u64();
        coverage_config.threads = 0;
        const CoverageResult coverage = coverage_experiment(coverage_config);
        raise(v[kGeneratorZeroNoise], std::abs(coverage.coverage - 1.0));
    }

    return v;
}

} // namespace

ComparisonDataset random_instance(const InstanceSpec& spec) {
    if (spec.n_items < 2 || spec.n_items > 50) {
        throw std::invalid_argument("instance spec: n_items must be in [2, 50]");
    }
    if (spec.n_locations < 2 || spec.n_locations > 8) {
        throw std::invalid_argument("instance spec: n_locations must be in [2, 8]");
    }
    if (!(spec.price_dispersion > 0.0) || !std::isfinite(spec.price_dispersion)) {
        throw std::invalid_argument("instance spec: price dispersion must be positive");
    }
    const std::size_t n_items = static_cast<std::size_t>(spec.n_items);
    const std::size_t n_locations = static_cast<std::size_t>(spec.n_locations);
    rng::Sampler sampler(spec.seed);

    std::vector<std::string> items(n_items);
    for (std::size_t n = 0; n < n_items; ++n) {
        char label[8];
        std::snprintf(label, sizeof(label), "I%02zu", n + 1);
        items[n] = label;
    }
    std::vector<std::string> locations(n_locations);
    for (std::size_t m = 0; m < n_locations; ++m) {
        locations[m] = "L" + std::to_string(m + 1);
    }

    std::vector<double> prices(n_items * n_locations);
    for (std::size_t n = 0; n < n_items; ++n) {
        for (std::size_t m = 0; m < n_locations; ++m) {
            prices[n * n_locations + m] = std::exp(sampler.normal(0.0, spec.price_dispersion));
        }
    }

    // Shares: 0.3/N floor plus 0.7·Dirichlet(1.5), so every share exceeds
    // 0.3/50 = 0.006 > 0.005 and each column still sums to 1.
    std::vector<double> expenditures(n_items * n_locations);
    for (std::size_t m = 0; m < n_locations; ++m) {
        const std::vector<double> dirichlet = sampler.dirichlet(n_items, 1.5);
        const double total = std::exp(sampler.normal(0.0, 0.25));
        for (std::size_t n = 0; n < n_items; ++n) {
            const double share = 0.3 / static_cast<double>(n_items) + 0.7 * dirichlet[n];
            expenditures[n * n_locations + m] = share * total;
        }
        if (spec.share_regime == ShareRegime::WithNegativeHeading) {
            // Flip exactly one item negative, scaled so the column total
            // keeps at least 10% of its mass.
            const std::size_t flipped = sampler.uniform_index(n_items);
            const double share = expenditures[flipped * n_locations + m] / total;
            const double gamma = std::min(0.25, 0.9 / share - 1.0);
            expenditures[flipped * n_locations + m] *= -gamma;
        }
    }

    return ComparisonDataset(std::move(items), std::move(locations), std::move(prices),
                             std::move(expenditures));
}

const PropertyResult* PropertySuiteReport::find(std::string_view id) const {
    for (const PropertyResult& result : results) {
        if (result.id == id) return &result;
    }
    return nullptr;
}

PropertySuiteReport run_all_properties(std::uint64_t seed, int trials) {
    PropertySuiteReport report;
    report.seed = seed;
    report.trials = std::max(trials, 0);
    if (trials <= 0) return report;

    std::vector<std::array<double, kPerTrialCount>> per_trial(
        static_cast<std::size_t>(trials));
    parallel_for(trials, /*threads=*/0,
                 [&](int t) { per_trial[static_cast<std::size_t>(t)] = run_trial(seed, t); });

    report.results.reserve(static_cast<std::size_t>(kPerTrialCount) +
                           static_cast<std::size_t>(kFixedCount));
    for (std::size_t i = 0; i < kPerTrialCount; ++i) {
        PropertyResult result;
        result.id = kPerTrialDefs[i].id;
        result.description = kPerTrialDefs[i].description;
        result.tolerance = kPerTrialDefs[i].tolerance;
        result.trials = trials;
        for (const auto& row : per_trial) {
            result.max_violation = std::max(result.max_violation, row[i]);
        }
        result.passed =
            kPerTrialDefs[i].informational || result.max_violation <= result.tolerance;
        report.results.push_back(std::move(result));
    }

    const std::array<double, kFixedCount> fixed = run_fixed(seed);
    for (std::size_t i = 0; i < kFixedCount; ++i) {
        PropertyResult result;
        result.id = kFixedDefs[i].id;
        result.description = kFixedDefs[i].description;
        result.tolerance = kFixedDefs[i].tolerance;
        result.trials = 1;
        result.max_violation = fixed[i];
        result.passed =
            kFixedDefs[i].informational || result.max_violation <= result.tolerance;
        report.results.push_back(std::move(result));
    }

    report.all_passed = true;
    for (const PropertyResult& result : report.results) {
        report.all_passed = report.all_passed && result.passed;
    }
    return report;
}

} // namespace priceidx
