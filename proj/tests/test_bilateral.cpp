#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "priceidx/bilateral.hpp"
#include "priceidx/dataset.hpp"
#include "test_support.hpp"

using namespace priceidx;
using testsupport::rel_gap;

namespace {

const BilateralView& reference_view() {
    static const ComparisonDataset ds = testsupport::reference_pair();
    static const BilateralView view = ds.bilateral_view("J", "K");
    return view;
}

} // namespace

TEST_CASE("reference pair: the four ratio-consistent indexes equal 3") {
    const BilateralView& view = reference_view();
    CHECK(laspeyres(view).value == 3.0);
    CHECK(rel_gap(paasche(view).value, 3.0) < 1e-15);
    CHECK(rel_gap(fisher(view).value, 3.0) < 1e-15);
    CHECK(rel_gap(walsh(view).value, 3.0) < 1e-14);
    // The logarithmic-mean weights happen to solve to exactly 3 here too.
    CHECK(rel_gap(log_weighted_index(view, WeightKind::Logarithmic).value, 3.0) < 1e-14);
}

TEST_CASE("reference pair: log-weighted closed forms") {
    const BilateralView& view = reference_view();

    const IndexEstimate tornqvist = log_weighted_index(view, WeightKind::Arithmetic);
    CHECK(rel_gap(tornqvist.log_value, 19.0 / 12.0 * std::log(2.0)) < 1e-14);
    CHECK(tornqvist.method == IndexMethod::Tornqvist);

    const IndexEstimate pd = log_weighted_index(view, WeightKind::Harmonic);
    CHECK(rel_gap(pd.log_value,
                  (7.0 * std::log(2.0) + 10.0 * std::log(4.0)) / 17.0) < 1e-14);

    const WeightScheme arithmetic = weight_scheme(view, WeightKind::Arithmetic);
    CHECK(arithmetic.values[0] == 0.5 * (2.0 / 6.0 + 0.5));
    CHECK(arithmetic.values[1] == 0.5 * (4.0 / 6.0 + 0.5));

    const WeightScheme harmonic = weight_scheme(view, WeightKind::Harmonic);
    CHECK(rel_gap(harmonic.values[0], 7.0 / 17.0) < 1e-14);
    CHECK(rel_gap(harmonic.values[1], 10.0 / 17.0) < 1e-14);

    const WeightScheme logarithmic = weight_scheme(view, WeightKind::Logarithmic);
    const double l1 = logarithmic_mean(2.0 / 6.0, 0.5);
    const double l2 = logarithmic_mean(4.0 / 6.0, 0.5);
    CHECK(rel_gap(logarithmic.values[0], l1 / (l1 + l2)) < 1e-14);
    CHECK(rel_gap(logarithmic.values[1], l2 / (l1 + l2)) < 1e-14);
}

TEST_CASE("reference pair: Walsh decomposition aggregates") {
    const WalshDecomposition d = walsh_decomposition(reference_view());
    const double w1 = std::sqrt(1.0 / 6.0);
    const double w2 = std::sqrt(1.0 / 3.0);
    CHECK(rel_gap(d.weights[0], w1 / (w1 + w2)) < 1e-14);
    CHECK(rel_gap(d.weights[1], w2 / (w1 + w2)) < 1e-14);
    CHECK(rel_gap(d.current_aggregate,
                  (w1 * std::sqrt(2.0) + w2 * 2.0) / (w1 + w2)) < 1e-14);
    CHECK(rel_gap(d.base_aggregate,
                  (w1 / std::sqrt(2.0) + w2 * 0.5) / (w1 + w2)) < 1e-14);
    CHECK(d.dropped_items.empty());
}

TEST_CASE("estimates carry consistent metadata") {
    const IndexEstimate estimate = fisher(reference_view());
    CHECK(estimate.target == "J");
    CHECK(estimate.base == "K");
    CHECK(estimate.method == IndexMethod::Fisher);
    CHECK(!estimate.var_log.has_value());
    CHECK(!estimate.se_log().has_value());
    IndexEstimate with_var = estimate;
    with_var.var_log = 0.25;
    CHECK(with_var.se_log().value() == 0.5);
}

TEST_CASE("value and log agree for every method on a random instance") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(42, 23, 2);
    const BilateralView view = ds.bilateral_view("L1", "L2");
    for (const IndexMethod method : kBilateralMethods) {
        const IndexEstimate estimate = bilateral_index(view, method);
        CHECK(rel_gap(estimate.value, std::exp(estimate.log_value)) < 1e-12);
    }
}

TEST_CASE("identity: every method returns 1 on a self pair") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(4, 17, 3);
    const BilateralView view = ds.bilateral_view("L2", "L2");
    for (const IndexMethod method : kBilateralMethods) {
        CHECK(rel_gap(bilateral_index(view, method).value, 1.0) < 1e-14);
    }
}

TEST_CASE("time reversal: forward times backward is 1") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(91, 29, 2);
    const BilateralView forward = ds.bilateral_view("L1", "L2");
    const BilateralView backward = ds.bilateral_view("L2", "L1");
    for (const IndexMethod method : {IndexMethod::Fisher, IndexMethod::Tornqvist,
                                     IndexMethod::SatoVartia, IndexMethod::ProductDummy,
                                     IndexMethod::Walsh}) {
        const double product =
            bilateral_index(forward, method).value * bilateral_index(backward, method).value;
        CHECK(rel_gap(product, 1.0) < 1e-12);
    }
    // One-sided indexes reverse into each other instead.
    CHECK(rel_gap(laspeyres(forward).value * paasche(backward).value, 1.0) < 1e-12);
    CHECK(rel_gap(paasche(forward).value * laspeyres(backward).value, 1.0) < 1e-12);
}

TEST_CASE("proportional price columns give the proportionality factor") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(8, 21, 2);
    const double factor = 1.75;
    std::vector<double> scaled(ds.item_count());
    for (std::size_t n = 0; n < ds.item_count(); ++n) scaled[n] = factor * ds.price(n, 1);
    const ComparisonDataset proportional = ds.with_location_prices(0, scaled);
    const BilateralView view = proportional.bilateral_view("L1", "L2");
    for (const IndexMethod method : kBilateralMethods) {
        CHECK(rel_gap(bilateral_index(view, method).value, factor) < 1e-12);
    }
}

TEST_CASE("mean value bounds: every index lies between the ratio extremes") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(77, 40, 2);
    const BilateralView view = ds.bilateral_view("L2", "L1");
    double lo = view.price_ratio[0];
    double hi = view.price_ratio[0];
    for (double r : view.price_ratio) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    for (const IndexMethod method : kBilateralMethods) {
        const double value = bilateral_index(view, method).value;
        CHECK(value >= lo * (1.0 - 1e-12));
        CHECK(value <= hi * (1.0 + 1e-12));
    }
}

TEST_CASE("unit invariance: rescaling item prices changes nothing") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(15, 12, 2);
    std::vector<double> factors(ds.item_count());
    for (std::size_t n = 0; n < factors.size(); ++n) factors[n] = 0.1 + 0.3 * (n % 7);
    const ComparisonDataset scaled = ds.with_item_prices_rescaled(factors);
    const BilateralView before = ds.bilateral_view("L1", "L2");
    const BilateralView after = scaled.bilateral_view("L1", "L2");
    for (const IndexMethod method : kBilateralMethods) {
        CHECK(rel_gap(bilateral_index(before, method).value,
                      bilateral_index(after, method).value) < 1e-12);
    }
}

TEST_CASE("logarithmic and harmonic means") {
    CHECK(logarithmic_mean(0.37, 0.37) == 0.37);
    CHECK(rel_gap(logarithmic_mean(4.0, 2.0), 2.0 / std::log(2.0)) < 1e-14);
    CHECK(rel_gap(logarithmic_mean(1.0, 1.0 + 1e-13), 1.0) < 1e-12);
    CHECK_THROWS_WITH_AS(logarithmic_mean(0.0, 1.0),
                         "logarithmic mean requires positive arguments", std::domain_error);
    CHECK(harmonic_mean(2.0, 2.0) == 2.0);
    CHECK(rel_gap(harmonic_mean(1.0, 3.0), 1.5) < 1e-15);
    CHECK_THROWS_WITH_AS(harmonic_mean(1.0, -1.0), "harmonic mean requires positive arguments",
                         std::domain_error);
}

TEST_CASE("zero shares fail by default and are tolerated on request") {
    // Item B has zero expenditure in location J.
    const ComparisonDataset ds({"A", "B", "C"}, {"J", "K"},
                               {2.0, 1.0, 3.0, 1.0, 4.0, 1.0},
                               {2.0, 1.0, 0.0, 1.0, 4.0, 1.0});
    const BilateralView view = ds.bilateral_view("J", "K");
    CHECK_THROWS_WITH_AS(log_weighted_index(view, WeightKind::Logarithmic),
                         "nonpositive share for item 'B' under logarithmic weights",
                         std::domain_error);
    CHECK_THROWS_WITH_AS(log_weighted_index(view, WeightKind::Harmonic),
                         "nonpositive share for item 'B' under harmonic weights",
                         std::domain_error);

    const WeightScheme tolerated = weight_scheme(view, WeightKind::Logarithmic, true);
    CHECK(tolerated.values[1] == 0.0);
    CHECK(tolerated.values[0] > 0.0);

    BilateralOptions options;
    options.tolerate_zero_shares = true;
    const IndexEstimate sv = bilateral_index(view, IndexMethod::SatoVartia, options);
    CHECK(sv.value > 0.0);

    // A negative share always fails, tolerated or not.
    const ComparisonDataset negative = testsupport::negative_heading_pair();
    const BilateralView negative_view = negative.bilateral_view("J", "K");
    CHECK_THROWS_AS(weight_scheme(negative_view, WeightKind::Logarithmic, true),
                    std::domain_error);
}

TEST_CASE("Walsh negative share products: error and drop policies") {
    // Item X has expenditure −1 in J and +1 in K: share product < 0.
    const ComparisonDataset ds({"X", "Y", "Z"}, {"J", "K"},
                               {4.0, 1.0, 2.0, 1.0, 1.0, 1.0},
                               {-1.0, 1.0, 5.0, 3.0, 2.0, 2.0});
    const BilateralView view = ds.bilateral_view("J", "K");
    CHECK_THROWS_WITH_AS(walsh(view), "negative share product for item 'X' in Walsh weights",
                         std::domain_error);

    const WalshDecomposition dropped = walsh_decomposition(view, WalshNegativePolicy::Drop);
    CHECK(dropped.dropped_items == std::vector<std::size_t>{0});
    CHECK(dropped.weights[0] == 0.0);
    CHECK(rel_gap(dropped.weights[1] + dropped.weights[2], 1.0) < 1e-14);
    const IndexEstimate estimate = walsh(view, WalshNegativePolicy::Drop);
    CHECK(estimate.value > 0.0);

    BilateralOptions options;
    options.walsh_policy = WalshNegativePolicy::Drop;
    CHECK(bilateral_index(view, IndexMethod::Walsh, options).value == estimate.value);
}

TEST_CASE("one-sided aggregates can be undefined under negative shares") {
    // Base-location shares (−4, 5) with huge relative price on the negative
    // item drive the base-weighted sum below zero.
    const ComparisonDataset ds({"X", "Y"}, {"J", "K"},
                               {10.0, 1.0, 0.1, 1.0},
                               {-40.0, -4.0, 44.0, 5.0});
    const BilateralView view = ds.bilateral_view("J", "K");
    CHECK_THROWS_WITH_AS(laspeyres(view), "nonpositive Laspeyres aggregate", std::domain_error);
    const BilateralView reversed = ds.bilateral_view("K", "J");
    CHECK_THROWS_WITH_AS(paasche(reversed), "Paasche undefined: nonpositive harmonic aggregate",
                         std::domain_error);
}

TEST_CASE("method names parse and print") {
    for (const IndexMethod method : kBilateralMethods) {
        CHECK(parse_method(method_name(method)) == method);
    }
    CHECK(parse_method("geks") == IndexMethod::Geks);
    CHECK(parse_method("GEKS") == IndexMethod::Geks);
    CHECK(parse_method("sv") == IndexMethod::SatoVartia);
    CHECK(parse_method("pd") == IndexMethod::ProductDummy);
    CHECK(parse_method("cpd") == IndexMethod::ProductDummy);
    CHECK(parse_method("torn") == IndexMethod::Tornqvist);
    CHECK(parse_method("Fisher") == IndexMethod::Fisher);
    CHECK(!parse_method("unknown").has_value());
    CHECK(method_name(IndexMethod::SatoVartia) == "sato-vartia");
    CHECK(method_name(IndexMethod::ProductDummy) == "product-dummy");
}

TEST_CASE("the multilateral tag is rejected by the pairwise dispatcher") {
    CHECK_THROWS_WITH_AS(bilateral_index(reference_view(), IndexMethod::Geks),
                         "GEKS is multilateral; use the dataset-level entry point",
                         std::invalid_argument);
}
