#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace priceidx {

/// Expenditure shares of one location: values[n] = e_n / Σ_m e_m.
/// Entries sum to 1; individual entries may be negative (net-export-style
/// headings carry negative expenditure).
struct ShareVector {
    std::string location;
    std::vector<double> values;
};

/// The two-location slice every bilateral formula consumes: price relatives
/// π_n = p_n,target / p_n,base plus both locations' expenditure shares.
/// Raw price and expenditure columns are carried along so that quantities
/// q_n = e_n / p_n are derivable without going back to the dataset.
struct BilateralView {
    std::string target; ///< location whose price level is being measured
    std::string base;   ///< reference location
    std::shared_ptr<const std::vector<std::string>> item_labels;
    std::vector<double> price_ratio; ///< π_n, strictly positive
    std::vector<double> shares_target;
    std::vector<double> shares_base;
    std::vector<double> prices_target;
    std::vector<double> prices_base;
    std::vector<double> expend_target;
    std::vector<double> expend_base;

    std::size_t size() const noexcept { return price_ratio.size(); }

    /// True when target and base are the same location id.
    bool self_pair() const noexcept { return target == base; }

    const std::string& item_label(std::size_t n) const;

    std::vector<double> quantities_target() const;
    std::vector<double> quantities_base() const;
};

/// Immutable N-items × M-locations panel of positive prices and real-valued
/// expenditures. All computation modules consume views of this type; nothing
/// mutates it after construction, so instances are safe to share across
/// threads.
class ComparisonDataset {
  public:
    /// Matrices are row-major item × location. Throws std::invalid_argument
    /// on: fewer than 2 items or locations, size mismatch, duplicate or
    /// empty labels, nonpositive or non-finite prices, non-finite
    /// expenditures, or a location whose expenditures sum to zero.
    ComparisonDataset(std::vector<std::string> items,
                      std::vector<std::string> locations,
                      std::vector<double> prices,
                      std::vector<double> expenditures);

    std::size_t item_count() const noexcept { return n_items_; }
    std::size_t location_count() const noexcept { return n_locations_; }

    const std::vector<std::string>& items() const noexcept { return *items_; }
    const std::vector<std::string>& locations() const noexcept { return locations_; }

    /// Shared handle to the item labels (views alias it instead of copying).
    std::shared_ptr<const std::vector<std::string>> items_handle() const noexcept {
        return items_;
    }

    double price(std::size_t item, std::size_t location) const {
        return prices_[item * n_locations_ + location];
    }
    double expenditure(std::size_t item, std::size_t location) const {
        return expend_[item * n_locations_ + location];
    }
    double quantity(std::size_t item, std::size_t location) const {
        return expenditure(item, location) / price(item, location);
    }

    /// Index of a label; throws std::invalid_argument naming the unknown id.
    std::size_t item_index(std::string_view label) const;
    std::size_t location_index(std::string_view label) const;

    /// Expenditure shares of one location (computed on demand; shares are
    /// never stored, expenditures stay the single source of truth).
    ShareVector shares(std::size_t location) const;
    ShareVector shares(std::string_view location) const;

    /// Two-location slice; self-pairs are allowed (π_n = 1 exactly).
    BilateralView bilateral_view(std::size_t target, std::size_t base) const;
    BilateralView bilateral_view(std::string_view target, std::string_view base) const;

    // --- transformed copies used by property checks and resampling ---

    /// Rebuilds expenditures so the two locations exchange quantity vectors:
    /// e'_n,a = p_n,a · q_n,b and e'_n,b = p_n,b · q_n,a.
    ComparisonDataset with_quantities_swapped(std::size_t a, std::size_t b) const;

    /// Rescales item n's price row by unit_factors[n] > 0 in every location,
    /// expenditures unchanged (a change of measurement units).
    ComparisonDataset with_item_prices_rescaled(const std::vector<double>& unit_factors) const;

    /// Reorders items; permutation must be a bijection on [0, N).
    ComparisonDataset with_items_permuted(const std::vector<std::size_t>& permutation) const;

    /// Replaces one location's price column (expenditures unchanged).
    ComparisonDataset with_location_prices(std::size_t location,
                                           const std::vector<double>& prices) const;

    /// Dataset whose rows are rows[0], rows[1], … of this one (duplicates
    /// allowed — bootstrap resamples draw with replacement). Repeated item
    /// labels get a "#k" occurrence suffix to keep labels unique.
    ComparisonDataset with_resampled_items(const std::vector<std::size_t>& rows) const;

  private:
    std::shared_ptr<const std::vector<std::string>> items_;
    std::vector<std::string> locations_;
    std::vector<double> prices_;
    std::vector<double> expend_;
    std::size_t n_items_ = 0;
    std::size_t n_locations_ = 0;
};

} // namespace priceidx
