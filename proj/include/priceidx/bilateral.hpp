#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "priceidx/dataset.hpp"

namespace priceidx {

/// The index formulas this library computes. Geks is multilateral and only
/// valid where a full dataset (not a single pair) is in play.
enum class IndexMethod {
    Laspeyres,
    Paasche,
    Fisher,
    Tornqvist,
    SatoVartia,
    ProductDummy,
    Walsh,
    Geks,
};

inline constexpr std::array<IndexMethod, 7> kBilateralMethods = {
    IndexMethod::Laspeyres,  IndexMethod::Paasche,      IndexMethod::Fisher,
    IndexMethod::Tornqvist,  IndexMethod::SatoVartia,   IndexMethod::ProductDummy,
    IndexMethod::Walsh,
};

/// Stable lowercase name, e.g. "fisher", "sato-vartia".
std::string_view method_name(IndexMethod method) noexcept;

/// Parses a method name (case-insensitive; accepts the stable names plus
/// short aliases "sv", "pd", "cpd", "torn").
std::optional<IndexMethod> parse_method(std::string_view text) noexcept;

/// One bilateral (or multilateral) index result. `value` is the index level,
/// `log_value` its natural log; they agree to within round-off by
/// construction. `var_log` is filled by the variance module (or by callers
/// that requested it), never by the point-estimate operations themselves.
struct IndexEstimate {
    IndexMethod method{};
    std::string target;
    std::string base;
    double value = 1.0;
    double log_value = 0.0;
    std::optional<double> var_log;

    std::optional<double> se_log() const;
};

/// Weight kinds for the log-weighted index family. Arithmetic averages the
/// two locations' shares (Törnqvist), Logarithmic uses the normalized
/// logarithmic mean (Sato-Vartia), Harmonic the normalized harmonic mean
/// (bilateral product-dummy).
enum class WeightKind { Arithmetic, Logarithmic, Harmonic };

struct WeightScheme {
    WeightKind kind{};
    std::vector<double> values; ///< length N, sums to 1
};

/// What to do when an item's share product s_target·s_base is negative, which
/// makes the geometric-mean weight undefined: fail, or drop the item (with
/// the drop recorded so callers can warn).
enum class WalshNegativePolicy { Error, Drop };

/// Options shared by every operation that can hit the Walsh share-product
/// policy or a zero share under logarithmic/harmonic weights.
struct BilateralOptions {
    WalshNegativePolicy walsh_policy = WalshNegativePolicy::Error;
    bool tolerate_zero_shares = false;
};

/// The two aggregates whose ratio is the Walsh index, plus the normalized
/// geometric-mean weights. Items dropped under WalshNegativePolicy::Drop
/// carry weight 0 and are listed in dropped_items.
struct WalshDecomposition {
    double current_aggregate = 0.0; ///< Σ ϖ_n √π_n
    double base_aggregate = 0.0;    ///< Σ ϖ_n / √π_n
    std::vector<double> weights;    ///< ϖ_n, length N, sums to 1
    std::vector<std::size_t> dropped_items;
};

/// Logarithmic mean: (a−b)/(ln a − ln b), continuously extended to L(a,a)=a.
/// Requires a, b > 0. The branch switches to the limit when |ln a − ln b|
/// < 1e-12 to avoid catastrophic cancellation.
double logarithmic_mean(double a, double b);

/// Harmonic mean 2ab/(a+b); requires a, b > 0.
double harmonic_mean(double a, double b);

/// Base-weighted arithmetic index: value = Σ_n s_n,base · π_n.
/// Throws std::domain_error "nonpositive Laspeyres aggregate" if the sum is
/// not positive (possible under negative shares).
IndexEstimate laspeyres(const BilateralView& view);

/// Current-weighted harmonic index: value = (Σ_n s_n,target / π_n)^(−1).
/// Throws std::domain_error "Paasche undefined: nonpositive harmonic
/// aggregate" when the denominator sum is not positive.
IndexEstimate paasche(const BilateralView& view);

/// Geometric mean of the two one-sided indexes:
/// value = √(P_L · P_P), log_value = ½(ln P_L + ln P_P).
IndexEstimate fisher(const BilateralView& view);

/// Builds the normalized weights for one kind. Logarithmic and Harmonic
/// kinds require strictly positive shares; with tolerate_zero_shares set, a
/// zero share contributes weight 0 instead of failing (negative shares
/// always fail, naming the item).
WeightScheme weight_scheme(const BilateralView& view, WeightKind kind,
                           bool tolerate_zero_shares = false);

/// Log-weighted index ln P = Σ_n ω_n ln π_n for a prebuilt scheme. The
/// method tag follows the scheme's kind.
IndexEstimate log_weighted_index(const BilateralView& view, const WeightScheme& scheme);

/// Convenience overload that builds the scheme first.
IndexEstimate log_weighted_index(const BilateralView& view, WeightKind kind,
                                 bool tolerate_zero_shares = false);

/// Walsh index P_a / P_b from the geometric-mean weight decomposition.
IndexEstimate walsh(const BilateralView& view,
                    WalshNegativePolicy policy = WalshNegativePolicy::Error);

/// The aggregates and weights behind the Walsh index.
WalshDecomposition walsh_decomposition(const BilateralView& view,
                                       WalshNegativePolicy policy = WalshNegativePolicy::Error);

/// Dispatches to the seven bilateral formulas by method tag. Geks is
/// rejected with std::invalid_argument (it needs a dataset, not a pair).
IndexEstimate bilateral_index(const BilateralView& view, IndexMethod method,
                              const BilateralOptions& options = {});

} // namespace priceidx
