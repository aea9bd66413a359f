#include "priceidx/bilateral.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace priceidx {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void require_matching_size(const BilateralView& view, const WeightScheme& scheme) {
    if (scheme.values.size() != view.size()) {
        throw std::invalid_argument("weight scheme size does not match view");
    }
}

IndexEstimate make_estimate(IndexMethod method, const BilateralView& view, double value,
                            double log_value) {
    IndexEstimate est;
    est.method = method;
    est.target = view.target;
    est.base = view.base;
    est.value = value;
    est.log_value = log_value;
    return est;
}

} // namespace

std::string_view method_name(IndexMethod method) noexcept {
    switch (method) {
        case IndexMethod::Laspeyres: return "laspeyres";
        case IndexMethod::Paasche: return "paasche";
        case IndexMethod::Fisher: return "fisher";
        case IndexMethod::Tornqvist: return "tornqvist";
        case IndexMethod::SatoVartia: return "sato-vartia";
        case IndexMethod::ProductDummy: return "product-dummy";
        case IndexMethod::Walsh: return "walsh";
        case IndexMethod::Geks: return "geks";
    }
    return "unknown";
}

std::optional<IndexMethod> parse_method(std::string_view text) noexcept {
    const std::string name = lowercase(text);
    if (name == "laspeyres") return IndexMethod::Laspeyres;
    if (name == "paasche") return IndexMethod::Paasche;
    if (name == "fisher") return IndexMethod::Fisher;
    if (name == "tornqvist" || name == "torn" || name == "toernqvist") {
        return IndexMethod::Tornqvist;
    }
    if (name == "sato-vartia" || name == "satovartia" || name == "sv") {
        return IndexMethod::SatoVartia;
    }
    if (name == "product-dummy" || name == "productdummy" || name == "pd" || name == "cpd") {
        return IndexMethod::ProductDummy;
    }
    if (name == "walsh") return IndexMethod::Walsh;
    if (name == "geks") return IndexMethod::Geks;
    return std::nullopt;
}

std::optional<double> IndexEstimate::se_log() const {
    if (!var_log) return std::nullopt;
    return std::sqrt(*var_log);
}

double logarithmic_mean(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("logarithmic mean requires positive arguments");
    }
    const double la = std::log(a);
    const double lb = std::log(b);
    if (std::abs(la - lb) < 1e-12) return a;
    return (a - b) / (la - lb);
}

double harmonic_mean(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("harmonic mean requires positive arguments");
    }
    return 2.0 * a * b / (a + b);
}

IndexEstimate laspeyres(const BilateralView& view) {
    double sum = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        sum += view.shares_base[n] * view.price_ratio[n];
    }
    if (!(sum > 0.0)) {
        throw std::domain_error("nonpositive Laspeyres aggregate");
    }
    return make_estimate(IndexMethod::Laspeyres, view, sum, std::log(sum));
}

IndexEstimate paasche(const BilateralView& view) {
    double inverse_sum = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        inverse_sum += view.shares_target[n] / view.price_ratio[n];
    }
    if (!(inverse_sum > 0.0)) {
        throw std::domain_error("Paasche undefined: nonpositive harmonic aggregate");
    }
    const double value = 1.0 / inverse_sum;
    return make_estimate(IndexMethod::Paasche, view, value, std::log(value));
}

IndexEstimate fisher(const BilateralView& view) {
    const IndexEstimate l = laspeyres(view);
    const IndexEstimate p = paasche(view);
    const double value = std::sqrt(l.value * p.value);
    const double log_value = 0.5 * (l.log_value + p.log_value);
    return make_estimate(IndexMethod::Fisher, view, value, log_value);
}

WeightScheme weight_scheme(const BilateralView& view, WeightKind kind,
                           bool tolerate_zero_shares) {
    WeightScheme scheme;
    scheme.kind = kind;
    scheme.values.resize(view.size());

    if (kind == WeightKind::Arithmetic) {
        // Plain average of the two share vectors; already sums to 1, no
        // normalization (negative shares are permitted here).
        for (std::size_t n = 0; n < view.size(); ++n) {
            scheme.values[n] = 0.5 * (view.shares_target[n] + view.shares_base[n]);
        }
        return scheme;
    }

    double total = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        const double sj = view.shares_target[n];
        const double sk = view.shares_base[n];
        if (sj < 0.0 || sk < 0.0 || (!tolerate_zero_shares && (sj == 0.0 || sk == 0.0))) {
            const char* kind_name =
                kind == WeightKind::Logarithmic ? "logarithmic" : "harmonic";
            throw std::domain_error(std::string("nonpositive share for item '") +
                                    view.item_label(n) + "' under " + kind_name + " weights");
        }
        double kernel = 0.0;
        if (sj > 0.0 && sk > 0.0) {
            kernel = kind == WeightKind::Logarithmic ? logarithmic_mean(sj, sk)
                                                     : harmonic_mean(sj, sk);
        }
        scheme.values[n] = kernel;
        total += kernel;
    }
    if (!(total > 0.0)) {
        throw std::domain_error("weight scheme undefined: no positive weight mass");
    }
    for (auto& w : scheme.values) w /= total;
    return scheme;
}

IndexEstimate log_weighted_index(const BilateralView& view, const WeightScheme& scheme) {
    require_matching_size(view, scheme);
    double log_value = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        log_value += scheme.values[n] * std::log(view.price_ratio[n]);
    }
    IndexMethod method = IndexMethod::Tornqvist;
    if (scheme.kind == WeightKind::Logarithmic) method = IndexMethod::SatoVartia;
    if (scheme.kind == WeightKind::Harmonic) method = IndexMethod::ProductDummy;
    return make_estimate(method, view, std::exp(log_value), log_value);
}

IndexEstimate log_weighted_index(const BilateralView& view, WeightKind kind,
                                 bool tolerate_zero_shares) {
    return log_weighted_index(view, weight_scheme(view, kind, tolerate_zero_shares));
}

WalshDecomposition walsh_decomposition(const BilateralView& view, WalshNegativePolicy policy) {
    WalshDecomposition result;
    result.weights.resize(view.size(), 0.0);

    double total = 0.0;
    for (std::size_t n = 0; n < view.size(); ++n) {
        const double product = view.shares_target[n] * view.shares_base[n];
        if (product < 0.0) {
            if (policy == WalshNegativePolicy::Error) {
                throw std::domain_error(std::string("negative share product for item '") +
                                        view.item_label(n) + "' in Walsh weights");
            }
            result.dropped_items.push_back(n);
            continue;
        }
        result.weights[n] = std::sqrt(product);
        total += result.weights[n];
    }
    if (!(total > 0.0)) {
        throw std::domain_error("Walsh undefined: no positive weight mass");
    }
    for (auto& w : result.weights) w /= total;

    for (std::size_t n = 0; n < view.size(); ++n) {
        const double root = std::sqrt(view.price_ratio[n]);
        result.current_aggregate += result.weights[n] * root;
        result.base_aggregate += result.weights[n] / root;
    }
    return result;
}

IndexEstimate walsh(const BilateralView& view, WalshNegativePolicy policy) {
    const WalshDecomposition d = walsh_decomposition(view, policy);
    const double value = d.current_aggregate / d.base_aggregate;
    const double log_value = std::log(d.current_aggregate) - std::log(d.base_aggregate);
    return make_estimate(IndexMethod::Walsh, view, value, log_value);
}

IndexEstimate bilateral_index(const BilateralView& view, IndexMethod method,
                              const BilateralOptions& options) {
    switch (method) {
        case IndexMethod::Laspeyres: return laspeyres(view);
        case IndexMethod::Paasche: return paasche(view);
        case IndexMethod::Fisher: return fisher(view);
        case IndexMethod::Tornqvist:
            return log_weighted_index(view, WeightKind::Arithmetic, options.tolerate_zero_shares);
        case IndexMethod::SatoVartia:
            return log_weighted_index(view, WeightKind::Logarithmic, options.tolerate_zero_shares);
        case IndexMethod::ProductDummy:
            return log_weighted_index(view, WeightKind::Harmonic, options.tolerate_zero_shares);
        case IndexMethod::Walsh: return walsh(view, options.walsh_policy);
        case IndexMethod::Geks: break;
    }
    throw std::invalid_argument("GEKS is multilateral; use the dataset-level entry point");
}

} // namespace priceidx
