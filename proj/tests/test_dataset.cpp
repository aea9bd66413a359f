#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "priceidx/dataset.hpp"
#include "test_support.hpp"

using namespace priceidx;
using testsupport::rel_gap;

TEST_CASE("reference pair exposes the documented shares and ratios") {
    const ComparisonDataset ds = testsupport::reference_pair();
    CHECK(ds.item_count() == 2);
    CHECK(ds.location_count() == 2);

    const BilateralView view = ds.bilateral_view("J", "K");
    CHECK(view.price_ratio[0] == 2.0);
    CHECK(view.price_ratio[1] == 4.0);
    CHECK(view.shares_base[0] == 0.5);
    CHECK(view.shares_base[1] == 0.5);
    CHECK(view.shares_target[0] == 2.0 / 6.0);
    CHECK(view.shares_target[1] == 4.0 / 6.0);
    CHECK(view.target == "J");
    CHECK(view.base == "K");
    CHECK(view.item_label(0) == "A");
    CHECK(view.item_label(1) == "B");
}

TEST_CASE("self pair has unit ratios exactly") {
    const ComparisonDataset ds = testsupport::reference_pair();
    const BilateralView view = ds.bilateral_view("K", "K");
    CHECK(view.self_pair());
    for (double ratio : view.price_ratio) CHECK(ratio == 1.0);
}

TEST_CASE("reversed pair ratios are elementwise reciprocals") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(31, 20, 3);
    const BilateralView forward = ds.bilateral_view("L1", "L3");
    const BilateralView backward = ds.bilateral_view("L3", "L1");
    for (std::size_t n = 0; n < forward.size(); ++n) {
        CHECK(rel_gap(forward.price_ratio[n] * backward.price_ratio[n], 1.0) < 1e-14);
    }
}

TEST_CASE("shares sum to one") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(7, 37, 5);
    for (std::size_t m = 0; m < ds.location_count(); ++m) {
        double total = 0.0;
        for (double s : ds.shares(m).values) total += s;
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("quantities derive from expenditures over prices") {
    const ComparisonDataset ds = testsupport::reference_pair();
    CHECK(ds.quantity(0, 0) == 1.0);
    CHECK(ds.quantity(1, 1) == 1.0);
    const BilateralView view = ds.bilateral_view("J", "K");
    CHECK(view.quantities_target() == std::vector<double>{1.0, 1.0});
    CHECK(view.quantities_base() == std::vector<double>{1.0, 1.0});
}

TEST_CASE("constructor validation messages") {
    const std::vector<std::string> ab{"A", "B"};
    const std::vector<std::string> jk{"J", "K"};
    const std::vector<double> ones{1.0, 1.0, 1.0, 1.0};

    CHECK_THROWS_WITH_AS(ComparisonDataset({"A"}, jk, {1.0, 1.0}, {1.0, 1.0}),
                         "dataset needs at least 2 items", std::invalid_argument);
    CHECK_THROWS_WITH_AS(ComparisonDataset(ab, {"J"}, {1.0, 1.0}, {1.0, 1.0}),
                         "dataset needs at least 2 locations", std::invalid_argument);
    CHECK_THROWS_WITH_AS(ComparisonDataset({"A", "A"}, jk, ones, ones),
                         "duplicate item label 'A'", std::invalid_argument);
    CHECK_THROWS_WITH_AS(ComparisonDataset(ab, {"J", ""}, ones, ones),
                         "empty location label", std::invalid_argument);
    CHECK_THROWS_WITH_AS(ComparisonDataset(ab, jk, {1.0, 1.0}, ones),
                         "price matrix size does not match labels", std::invalid_argument);
    CHECK_THROWS_WITH_AS(ComparisonDataset(ab, jk, ones, {1.0, 1.0, 1.0}),
                         "expenditure matrix size does not match labels", std::invalid_argument);
    CHECK_THROWS_WITH_AS(ComparisonDataset(ab, jk, {1.0, -2.0, 1.0, 1.0}, ones),
                         "nonpositive price at (A,K)", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        ComparisonDataset(ab, jk, {1.0, 1.0, std::nan(""), 1.0}, ones),
        "non-finite price at (B,J)", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        ComparisonDataset(ab, jk, ones, {1.0, 1.0, std::numeric_limits<double>::infinity(), 1.0}),
        "non-finite expenditure at (B,J)", std::invalid_argument);
    CHECK_THROWS_WITH_AS(ComparisonDataset(ab, jk, ones, {1.0, -1.0, -1.0, 1.0}),
                         "zero total expenditure at location 'J'", std::invalid_argument);
}

TEST_CASE("label lookup failures name the label") {
    const ComparisonDataset ds = testsupport::reference_pair();
    CHECK_THROWS_WITH_AS(ds.location_index("nope"), "unknown location 'nope'",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ds.item_index("nope"), "unknown item 'nope'", std::invalid_argument);
    CHECK_THROWS_WITH_AS(ds.bilateral_view("J", "nope"), "unknown location 'nope'",
                         std::invalid_argument);
}

TEST_CASE("negative expenditures are allowed while totals stay positive") {
    const ComparisonDataset ds = testsupport::negative_heading_pair();
    const ShareVector shares = ds.shares("J");
    CHECK(shares.values[0] == -1.0 / 6.0);
    CHECK(shares.values[1] == 5.0 / 6.0);
}

TEST_CASE("swapping quantities exchanges the quantity vectors") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(11, 9, 2);
    const ComparisonDataset swapped = ds.with_quantities_swapped(0, 1);
    for (std::size_t n = 0; n < ds.item_count(); ++n) {
        CHECK(swapped.price(n, 0) == ds.price(n, 0));
        CHECK(swapped.price(n, 1) == ds.price(n, 1));
        CHECK(rel_gap(swapped.quantity(n, 0), ds.quantity(n, 1)) < 1e-15);
        CHECK(rel_gap(swapped.quantity(n, 1), ds.quantity(n, 0)) < 1e-15);
    }
}

TEST_CASE("rescaling item prices leaves shares bitwise unchanged") {
    const ComparisonDataset ds = testsupport::random_positive_dataset(13, 8, 3);
    std::vector<double> factors(ds.item_count());
    for (std::size_t n = 0; n < factors.size(); ++n) factors[n] = 0.25 * (n + 1);
    const ComparisonDataset scaled = ds.with_item_prices_rescaled(factors);
    for (std::size_t m = 0; m < ds.location_count(); ++m) {
        CHECK(scaled.shares(m).values == ds.shares(m).values);
    }
    for (std::size_t n = 0; n < ds.item_count(); ++n) {
        CHECK(scaled.price(n, 0) == ds.price(n, 0) * factors[n]);
    }
    CHECK_THROWS_WITH_AS(ds.with_item_prices_rescaled({1.0}),
                         "unit factor count does not match item count", std::invalid_argument);
    std::vector<double> bad = factors;
    bad[2] = -1.0;
    CHECK_THROWS_WITH_AS(ds.with_item_prices_rescaled(bad),
                         "unit factors must be positive and finite", std::invalid_argument);
}

TEST_CASE("permuting items reorders rows") {
    const ComparisonDataset ds = testsupport::three_locations();
    const ComparisonDataset permuted = ds.with_items_permuted({2, 0, 1});
    CHECK(permuted.items() == std::vector<std::string>{"z", "x", "y"});
    CHECK(permuted.price(0, 0) == ds.price(2, 0));
    CHECK(permuted.expenditure(1, 2) == ds.expenditure(0, 2));
    CHECK_THROWS_WITH_AS(ds.with_items_permuted({0, 0, 1}), "invalid item permutation",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ds.with_items_permuted({0, 1}),
                         "permutation size does not match item count", std::invalid_argument);
}

TEST_CASE("replacing a location's price column") {
    const ComparisonDataset ds = testsupport::three_locations();
    const ComparisonDataset replaced = ds.with_location_prices(1, {7.0, 8.0, 9.0});
    CHECK(replaced.price(0, 1) == 7.0);
    CHECK(replaced.price(2, 1) == 9.0);
    CHECK(replaced.price(0, 0) == ds.price(0, 0));
    CHECK_THROWS_WITH_AS(ds.with_location_prices(1, {7.0}),
                         "price column size does not match item count", std::invalid_argument);
}

TEST_CASE("resampling rows duplicates values and disambiguates labels") {
    const ComparisonDataset ds = testsupport::three_locations();
    const ComparisonDataset resampled = ds.with_resampled_items({1, 1, 2, 1});
    CHECK(resampled.item_count() == 4);
    CHECK(resampled.items() == std::vector<std::string>{"y", "y#2", "z", "y#3"});
    for (std::size_t m = 0; m < ds.location_count(); ++m) {
        CHECK(resampled.price(0, m) == ds.price(1, m));
        CHECK(resampled.price(1, m) == ds.price(1, m));
        CHECK(resampled.price(2, m) == ds.price(2, m));
        CHECK(resampled.expenditure(3, m) == ds.expenditure(1, m));
    }
    CHECK_THROWS_WITH_AS(ds.with_resampled_items({0, 9}), "resample row index out of range",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ds.with_resampled_items({0}), "resample needs at least 2 rows",
                         std::invalid_argument);
}
