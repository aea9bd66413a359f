#include "priceidx/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace priceidx {

namespace {

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void check_labels_unique(const std::vector<std::string>& labels, const char* what) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(labels.size());
    for (const auto& label : labels) {
        if (label.empty()) fail(std::string("empty ") + what + " label");
        if (!seen.insert(label).second) {
            fail(std::string("duplicate ") + what + " label '" + label + "'");
        }
    }
}

} // namespace

const std::string& BilateralView::item_label(std::size_t n) const {
    static const std::string unnamed = "?";
    if (item_labels && n < item_labels->size()) return (*item_labels)[n];
    return unnamed;
}

std::vector<double> BilateralView::quantities_target() const {
    std::vector<double> q(size());
    for (std::size_t n = 0; n < q.size(); ++n) q[n] = expend_target[n] / prices_target[n];
    return q;
}

std::vector<double> BilateralView::quantities_base() const {
    std::vector<double> q(size());
    for (std::size_t n = 0; n < q.size(); ++n) q[n] = expend_base[n] / prices_base[n];
    return q;
}

ComparisonDataset::ComparisonDataset(std::vector<std::string> items,
                                     std::vector<std::string> locations,
                                     std::vector<double> prices,
                                     std::vector<double> expenditures)
    : locations_(std::move(locations)),
      prices_(std::move(prices)),
      expend_(std::move(expenditures)),
      n_items_(items.size()),
      n_locations_(locations_.size()) {
    if (n_items_ < 2) fail("dataset needs at least 2 items");
    if (n_locations_ < 2) fail("dataset needs at least 2 locations");
    check_labels_unique(items, "item");
    check_labels_unique(locations_, "location");
    const std::size_t cells = n_items_ * n_locations_;
    if (prices_.size() != cells) fail("price matrix size does not match labels");
    if (expend_.size() != cells) fail("expenditure matrix size does not match labels");

    for (std::size_t n = 0; n < n_items_; ++n) {
        for (std::size_t m = 0; m < n_locations_; ++m) {
            const double p = prices_[n * n_locations_ + m];
            const double e = expend_[n * n_locations_ + m];
            if (!std::isfinite(p)) {
                fail("non-finite price at (" + items[n] + "," + locations_[m] + ")");
            }
            if (p <= 0.0) {
                fail("nonpositive price at (" + items[n] + "," + locations_[m] + ")");
            }
            if (!std::isfinite(e)) {
                fail("non-finite expenditure at (" + items[n] + "," + locations_[m] + ")");
            }
        }
    }
    for (std::size_t m = 0; m < n_locations_; ++m) {
        double total = 0.0;
        for (std::size_t n = 0; n < n_items_; ++n) total += expend_[n * n_locations_ + m];
        if (total == 0.0) {
            fail("zero total expenditure at location '" + locations_[m] + "'");
        }
    }

    items_ = std::make_shared<const std::vector<std::string>>(std::move(items));
}

std::size_t ComparisonDataset::item_index(std::string_view label) const {
    const auto& labels = *items_;
    for (std::size_t n = 0; n < labels.size(); ++n) {
        if (labels[n] == label) return n;
    }
    fail("unknown item '" + std::string(label) + "'");
}

std::size_t ComparisonDataset::location_index(std::string_view label) const {
    for (std::size_t m = 0; m < locations_.size(); ++m) {
        if (locations_[m] == label) return m;
    }
    fail("unknown location '" + std::string(label) + "'");
}

ShareVector ComparisonDataset::shares(std::size_t location) const {
    if (location >= n_locations_) fail("location index out of range");
    double total = 0.0;
    for (std::size_t n = 0; n < n_items_; ++n) total += expend_[n * n_locations_ + location];
    if (total == 0.0) {
        throw std::domain_error("zero total expenditure at location '" + locations_[location] +
                                "'");
    }
    ShareVector result;
    result.location = locations_[location];
    result.values.resize(n_items_);
    for (std::size_t n = 0; n < n_items_; ++n) {
        result.values[n] = expend_[n * n_locations_ + location] / total;
    }
    return result;
}

ShareVector ComparisonDataset::shares(std::string_view location) const {
    return shares(location_index(location));
}

BilateralView ComparisonDataset::bilateral_view(std::size_t target, std::size_t base) const {
    if (target >= n_locations_ || base >= n_locations_) fail("location index out of range");
    BilateralView view;
    view.target = locations_[target];
    view.base = locations_[base];
    view.item_labels = items_;
    view.price_ratio.resize(n_items_);
    view.prices_target.resize(n_items_);
    view.prices_base.resize(n_items_);
    view.expend_target.resize(n_items_);
    view.expend_base.resize(n_items_);
    for (std::size_t n = 0; n < n_items_; ++n) {
        const double pj = prices_[n * n_locations_ + target];
        const double pk = prices_[n * n_locations_ + base];
        view.prices_target[n] = pj;
        view.prices_base[n] = pk;
        view.price_ratio[n] = pj / pk;
        view.expend_target[n] = expend_[n * n_locations_ + target];
        view.expend_base[n] = expend_[n * n_locations_ + base];
    }
    view.shares_target = shares(target).values;
    view.shares_base = (base == target) ? view.shares_target : shares(base).values;
    return view;
}

BilateralView ComparisonDataset::bilateral_view(std::string_view target,
                                                std::string_view base) const {
    return bilateral_view(location_index(target), location_index(base));
}

ComparisonDataset ComparisonDataset::with_quantities_swapped(std::size_t a, std::size_t b) const {
    if (a >= n_locations_ || b >= n_locations_) fail("location index out of range");
    std::vector<double> expend = expend_;
    for (std::size_t n = 0; n < n_items_; ++n) {
        const double pa = prices_[n * n_locations_ + a];
        const double pb = prices_[n * n_locations_ + b];
        const double qa = expend_[n * n_locations_ + a] / pa;
        const double qb = expend_[n * n_locations_ + b] / pb;
        expend[n * n_locations_ + a] = pa * qb;
        expend[n * n_locations_ + b] = pb * qa;
    }
    return ComparisonDataset(*items_, locations_, prices_, std::move(expend));
}

ComparisonDataset ComparisonDataset::with_item_prices_rescaled(
    const std::vector<double>& unit_factors) const {
    if (unit_factors.size() != n_items_) fail("unit factor count does not match item count");
    std::vector<double> prices = prices_;
    for (std::size_t n = 0; n < n_items_; ++n) {
        if (!(unit_factors[n] > 0.0) || !std::isfinite(unit_factors[n])) {
            fail("unit factors must be positive and finite");
        }
        for (std::size_t m = 0; m < n_locations_; ++m) {
            prices[n * n_locations_ + m] *= unit_factors[n];
        }
    }
    return ComparisonDataset(*items_, locations_, std::move(prices), expend_);
}

ComparisonDataset ComparisonDataset::with_items_permuted(
    const std::vector<std::size_t>& permutation) const {
    if (permutation.size() != n_items_) fail("permutation size does not match item count");
    std::vector<bool> used(n_items_, false);
    for (std::size_t idx : permutation) {
        if (idx >= n_items_ || used[idx]) fail("invalid item permutation");
        used[idx] = true;
    }
    std::vector<std::string> items(n_items_);
    std::vector<double> prices(prices_.size());
    std::vector<double> expend(expend_.size());
    for (std::size_t n = 0; n < n_items_; ++n) {
        const std::size_t src = permutation[n];
        items[n] = (*items_)[src];
        for (std::size_t m = 0; m < n_locations_; ++m) {
            prices[n * n_locations_ + m] = prices_[src * n_locations_ + m];
            expend[n * n_locations_ + m] = expend_[src * n_locations_ + m];
        }
    }
    return ComparisonDataset(std::move(items), locations_, std::move(prices), std::move(expend));
}

ComparisonDataset ComparisonDataset::with_location_prices(
    std::size_t location, const std::vector<double>& new_prices) const {
    if (location >= n_locations_) fail("location index out of range");
    if (new_prices.size() != n_items_) fail("price column size does not match item count");
    std::vector<double> prices = prices_;
    for (std::size_t n = 0; n < n_items_; ++n) {
        prices[n * n_locations_ + location] = new_prices[n];
    }
    return ComparisonDataset(*items_, locations_, std::move(prices), expend_);
}

ComparisonDataset ComparisonDataset::with_resampled_items(
    const std::vector<std::size_t>& rows) const {
    if (rows.size() < 2) fail("resample needs at least 2 rows");
    std::vector<std::string> items;
    items.reserve(rows.size());
    std::unordered_map<std::string_view, int> occurrences;
    std::vector<double> prices(rows.size() * n_locations_);
    std::vector<double> expend(rows.size() * n_locations_);
    for (std::size_t n = 0; n < rows.size(); ++n) {
        const std::size_t src = rows[n];
        if (src >= n_items_) fail("resample row index out of range");
        const std::string& label = (*items_)[src];
        const int count = ++occurrences[label];
        items.push_back(count == 1 ? label : label + "#" + std::to_string(count));
        for (std::size_t m = 0; m < n_locations_; ++m) {
            prices[n * n_locations_ + m] = prices_[src * n_locations_ + m];
            expend[n * n_locations_ + m] = expend_[src * n_locations_ + m];
        }
    }
    return ComparisonDataset(std::move(items), locations_, std::move(prices), std::move(expend));
}

} // namespace priceidx
