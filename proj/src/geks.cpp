#include "priceidx/geks.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "priceidx/bilateral.hpp"
#include "priceidx/variance.hpp"

namespace priceidx {

namespace {

/// Builds a (target, base) view from precomputed columns without going back
/// through the dataset (the formulas see exactly what bilateral_view builds).
BilateralView make_view(const ComparisonDataset& dataset,
                        const std::vector<ShareVector>& shares, std::size_t target,
                        std::size_t base) {
    const std::size_t n_items = dataset.item_count();
    BilateralView view;
    view.target = dataset.locations()[target];
    view.base = dataset.locations()[base];
    view.item_labels = dataset.items_handle();
    view.price_ratio.resize(n_items);
    view.prices_target.resize(n_items);
    view.prices_base.resize(n_items);
    view.expend_target.resize(n_items);
    view.expend_base.resize(n_items);
    for (std::size_t n = 0; n < n_items; ++n) {
        const double pj = dataset.price(n, target);
        const double pk = dataset.price(n, base);
        view.prices_target[n] = pj;
        view.prices_base[n] = pk;
        view.price_ratio[n] = pj / pk;
        view.expend_target[n] = dataset.expenditure(n, target);
        view.expend_base[n] = dataset.expenditure(n, base);
    }
    view.shares_target = shares[target].values;
    view.shares_base = shares[base].values;
    return view;
}

GeksResult assemble(const ComparisonDataset& dataset, std::string_view base,
                    bool want_variance) {
    const std::size_t m = dataset.location_count();
    const std::size_t n_items = dataset.item_count();

    GeksResult result;
    result.base = std::string(base);
    result.base_index = dataset.location_index(base);
    result.locations = dataset.locations();
    result.fisher_log.assign(m * m, 0.0);

    std::vector<ShareVector> shares;
    shares.reserve(m);
    for (std::size_t j = 0; j < m; ++j) shares.push_back(dataset.shares(j));

    // Per-location sums of Fisher score vectors: S_j[n] = Σ_k u_n(j, k).
    std::vector<double> score_sums;
    if (want_variance) score_sums.assign(m * n_items, 0.0);

    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            if (j == k) continue; // diagonal log is 0, scores are zero
            const BilateralView view = make_view(dataset, shares, j, k);
            try {
                result.fisher_log[j * m + k] = fisher(view).log_value;
                if (want_variance) {
                    const FisherScoreVector scores = fisher_scores(view);
                    double* row = score_sums.data() + j * n_items;
                    for (std::size_t n = 0; n < n_items; ++n) row[n] += scores.values[n];
                }
            } catch (const std::domain_error& e) {
                throw std::domain_error("GEKS: Fisher undefined for pair (" + view.target + "," +
                                        view.base + "): " + e.what());
            }
        }
    }

    // ln P_j = (1/M) Σ_k [ ln F(j,k) + ln F(k, base) ], then rebased so the
    // base's entry is exactly 0.
    const std::size_t b = result.base_index;
    double base_column_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) base_column_sum += result.fisher_log[k * m + b];

    std::vector<double> raw(m);
    for (std::size_t j = 0; j < m; ++j) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) row_sum += result.fisher_log[j * m + k];
        raw[j] = (row_sum + base_column_sum) / static_cast<double>(m);
    }
    result.log_index.resize(m);
    for (std::size_t j = 0; j < m; ++j) result.log_index[j] = raw[j] - raw[b];

    if (want_variance) {
        result.var_log.assign(m, 0.0);
        const double* base_row = score_sums.data() + b * n_items;
        const double m_sq = static_cast<double>(m) * static_cast<double>(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double* row = score_sums.data() + j * n_items;
            double sum = 0.0;
            for (std::size_t n = 0; n < n_items; ++n) {
                const double diff = row[n] - base_row[n];
                sum += diff * diff;
            }
            result.var_log[j] = sum / m_sq;
        }
    }
    return result;
}

std::size_t index_of(const GeksResult& result, std::string_view location) {
    for (std::size_t j = 0; j < result.locations.size(); ++j) {
        if (result.locations[j] == location) return j;
    }
    throw std::invalid_argument("unknown location '" + std::string(location) + "'");
}

} // namespace

double GeksResult::log_index_of(std::string_view location) const {
    return log_index[index_of(*this, location)];
}

double GeksResult::value_of(std::string_view location) const {
    return std::exp(log_index_of(location));
}

std::optional<double> GeksResult::var_log_of(std::string_view location) const {
    if (var_log.empty()) return std::nullopt;
    return var_log[index_of(*this, location)];
}

GeksResult geks_indexes(const ComparisonDataset& dataset, std::string_view base) {
    return assemble(dataset, base, /*want_variance=*/false);
}

GeksResult geks_with_variance(const ComparisonDataset& dataset, std::string_view base) {
    return assemble(dataset, base, /*want_variance=*/true);
}

std::vector<GeksFisherGapRow> geks_fisher_gap_report(const ComparisonDataset& dataset,
                                                     std::string_view base) {
    const GeksResult geks = geks_indexes(dataset, base);
    std::vector<GeksFisherGapRow> rows;
    rows.reserve(dataset.location_count() - 1);
    for (std::size_t j = 0; j < dataset.location_count(); ++j) {
        if (j == geks.base_index) continue;
        GeksFisherGapRow row;
        row.location = dataset.locations()[j];
        row.geks_log = geks.log_index[j];
        row.fisher_log = geks.fisher_log_at(j, geks.base_index);
        row.gap_log_pct = 100.0 * (row.geks_log - row.fisher_log);
        row.se_log_fisher =
            std::sqrt(var_log_fisher(dataset.bilateral_view(j, geks.base_index)));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace priceidx
