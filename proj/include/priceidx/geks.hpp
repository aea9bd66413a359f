#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "priceidx/dataset.hpp"

namespace priceidx {

/// The transitive multilateral index system: per-location log indexes
/// relative to a base, the full pairwise log-Fisher matrix they were built
/// from, and (optionally) delta-method variances of the log indexes.
struct GeksResult {
    std::string base;
    std::size_t base_index = 0;
    std::vector<std::string> locations; ///< dataset order
    std::vector<double> log_index;      ///< ln P_m vs base; [base_index] = 0
    std::vector<double> var_log;        ///< empty until the variance pass runs
    std::vector<double> fisher_log;     ///< M×M row-major ln Fisher(row, col); diagonal 0

    bool has_variance() const noexcept { return !var_log.empty(); }

    double fisher_log_at(std::size_t row, std::size_t col) const {
        return fisher_log[row * locations.size() + col];
    }

    /// Log index of a location by id; throws on unknown id.
    double log_index_of(std::string_view location) const;

    /// exp(log index) of a location by id.
    double value_of(std::string_view location) const;

    /// Variance of the log index by id; empty if the variance pass did not run.
    std::optional<double> var_log_of(std::string_view location) const;
};

/// Multilateral indexes only (variance fields left empty):
/// ln P_j = (1/M) Σ_k [ ln Fisher(j,k) + ln Fisher(k, base) ], rebased so the
/// base's log index is exactly 0. Any undefined pairwise Fisher aborts with
/// an error naming the offending pair.
GeksResult geks_indexes(const ComparisonDataset& dataset, std::string_view base);

/// Indexes plus variances. Var(ln P_j) = ‖S_j − S_base‖² / M², where S_j is
/// the per-item sum over k of the (j,k) Fisher score vectors — the
/// score-level identity equivalent of summing every entry of the stacked
/// pairwise covariance matrix. The base's variance is exactly 0.
GeksResult geks_with_variance(const ComparisonDataset& dataset, std::string_view base);

/// One row of the multilateral-vs-bilateral comparison table.
struct GeksFisherGapRow {
    std::string location;
    double geks_log = 0.0;
    double fisher_log = 0.0;
    double gap_log_pct = 0.0;    ///< 100 · (geks_log − fisher_log)
    double se_log_fisher = 0.0;  ///< delta-method SE of the bilateral log Fisher
};

/// Per-location gap between the multilateral log index and the direct
/// bilateral log Fisher against the same base, with the bilateral SE for
/// scale. The base location is omitted (its row would be identically 0).
std::vector<GeksFisherGapRow> geks_fisher_gap_report(const ComparisonDataset& dataset,
                                                     std::string_view base);

} // namespace priceidx
