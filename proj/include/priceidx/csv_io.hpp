#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "priceidx/dataset.hpp"

namespace priceidx {

/// Formats a double with 17 significant digits — enough for exact
/// round-tripping through text.
std::string format_full(double value);

/// Quotes a CSV field if it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

/// A small in-memory CSV table with a fixed header, written row by row.
/// All numbers must be pre-formatted by the caller (use format_full).
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string to_string() const;
    void write(const std::filesystem::path& path) const;

    std::size_t row_count() const noexcept { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Parses a price matrix and an expenditure matrix from two CSV files that
/// must carry a byte-identical header ("item,LOC1,...,LOCM") and item
/// column. Throws std::invalid_argument with row/column context on any
/// malformed cell, label mismatch, duplicate label, missing cell,
/// nonpositive price, or matrix smaller than 2×2.
ComparisonDataset load_dataset(const std::filesystem::path& prices_path,
                               const std::filesystem::path& expenditures_path);

/// Same parser over in-memory text (used by tests and small tools).
ComparisonDataset load_dataset_from_strings(const std::string& prices_csv,
                                            const std::string& expenditures_csv,
                                            const std::string& prices_name = "prices",
                                            const std::string& expenditures_name = "expenditures");

/// Serializes both matrices at 17 significant digits. load_dataset of the
/// written files reproduces the dataset bit-exactly.
void write_dataset(const ComparisonDataset& dataset,
                   const std::filesystem::path& prices_path,
                   const std::filesystem::path& expenditures_path);

/// The dataset's two matrices as CSV text (prices, expenditures).
std::pair<std::string, std::string> dataset_to_strings(const ComparisonDataset& dataset);

} // namespace priceidx
