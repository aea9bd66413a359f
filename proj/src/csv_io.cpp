#include "priceidx/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace priceidx {

namespace {

/// One parsed matrix: header labels (after the "item" cell), item labels,
/// and row-major values.
struct ParsedMatrix {
    std::string header_line;
    std::vector<std::string> locations;
    std::vector<std::string> items;
    std::vector<double> values;
};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"' && current.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

double parse_number(const std::string& token, const std::string& file_name, std::size_t row,
                    const std::string& column) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    const auto [parsed_end, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || parsed_end != end || token.empty()) {
        throw std::invalid_argument(file_name + ": row " + std::to_string(row) + ", column '" +
                                    column + "': cannot parse number from \"" + token + "\"");
    }
    return value;
}

ParsedMatrix parse_matrix(const std::string& text, const std::string& file_name) {
    ParsedMatrix matrix;
    std::istringstream stream(text);
    std::string line;
    std::size_t row = 0;
    while (std::getline(stream, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row == 1) {
            matrix.header_line = line;
            std::vector<std::string> fields = split_fields(line);
            if (fields.size() < 3 || fields[0] != "item") {
                throw std::invalid_argument(
                    file_name + ": header must be \"item,LOC1,...,LOCM\" with at least "
                                "2 locations");
            }
            matrix.locations.assign(fields.begin() + 1, fields.end());
            continue;
        }
        if (line.empty()) continue; // tolerate a trailing blank line
        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != matrix.locations.size() + 1) {
            throw std::invalid_argument(
                file_name + ": row " + std::to_string(row) + " has " +
                std::to_string(fields.size()) + " cells, expected " +
                std::to_string(matrix.locations.size() + 1));
        }
        matrix.items.push_back(fields[0]);
        for (std::size_t m = 0; m < matrix.locations.size(); ++m) {
            matrix.values.push_back(
                parse_number(fields[m + 1], file_name, row, matrix.locations[m]));
        }
    }
    if (matrix.header_line.empty() && matrix.locations.empty()) {
        throw std::invalid_argument(file_name + ": empty file");
    }
    if (matrix.items.size() < 2) {
        throw std::invalid_argument(file_name + ": needs at least 2 item rows");
    }
    return matrix;
}

ComparisonDataset dataset_from_matrices(ParsedMatrix prices, const ParsedMatrix& expenditures,
                                        const std::string& prices_name,
                                        const std::string& expenditures_name) {
    if (prices.header_line != expenditures.header_line) {
        throw std::invalid_argument(prices_name + " and " + expenditures_name +
                                    ": headers differ; the two files must carry a "
                                    "byte-identical header");
    }
    if (prices.items != expenditures.items) {
        throw std::invalid_argument(prices_name + " and " + expenditures_name +
                                    ": item columns differ; the two files must list the "
                                    "same items in the same order");
    }
    // Label uniqueness and value validation live in the dataset constructor;
    // it reports offending labels and positions.
    return ComparisonDataset(std::move(prices.items), std::move(prices.locations),
                             std::move(prices.values),
                             std::vector<double>(expenditures.values));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw std::invalid_argument("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return std::move(buffer).str();
}

std::string matrix_to_csv(const ComparisonDataset& dataset, bool prices) {
    std::string out = "item";
    for (const std::string& location : dataset.locations()) {
        out += ',';
        out += csv_escape(location);
    }
    out += '\n';
    for (std::size_t n = 0; n < dataset.item_count(); ++n) {
        out += csv_escape(dataset.items()[n]);
        for (std::size_t m = 0; m < dataset.location_count(); ++m) {
            out += ',';
            out += format_full(prices ? dataset.price(n, m) : dataset.expenditure(n, m));
        }
        out += '\n';
    }
    return out;
}

} // namespace

std::string format_full(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string quoted = "\"";
    for (const char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted += '"';
    return quoted;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("CSV table needs a nonempty header");
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
        throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) +
                                    " cells, header has " + std::to_string(header_.size()));
    }
    rows_.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i > 0) out += ',';
        out += csv_escape(header_[i]);
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += csv_escape(row[i]);
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) {
        throw std::invalid_argument("cannot write file: " + path.string());
    }
    stream << to_string();
    if (!stream) {
        throw std::invalid_argument("write failed: " + path.string());
    }
}

ComparisonDataset load_dataset(const std::filesystem::path& prices_path,
                               const std::filesystem::path& expenditures_path) {
    return load_dataset_from_strings(read_file(prices_path), read_file(expenditures_path),
                                     prices_path.string(), expenditures_path.string());
}

ComparisonDataset load_dataset_from_strings(const std::string& prices_csv,
                                            const std::string& expenditures_csv,
                                            const std::string& prices_name,
                                            const std::string& expenditures_name) {
    ParsedMatrix prices = parse_matrix(prices_csv, prices_name);
    ParsedMatrix expenditures = parse_matrix(expenditures_csv, expenditures_name);
    return dataset_from_matrices(std::move(prices), expenditures, prices_name,
                                 expenditures_name);
}

void write_dataset(const ComparisonDataset& dataset, const std::filesystem::path& prices_path,
                   const std::filesystem::path& expenditures_path) {
    const auto [prices_csv, expenditures_csv] = dataset_to_strings(dataset);
    for (const auto& [path, text] :
         {std::pair{prices_path, prices_csv}, std::pair{expenditures_path, expenditures_csv}}) {
        std::ofstream stream(path, std::ios::binary);
        if (!stream) {
            throw std::invalid_argument("cannot write file: " + path.string());
        }
        stream << text;
        if (!stream) {
            throw std::invalid_argument("write failed: " + path.string());
        }
    }
}

std::pair<std::string, std::string> dataset_to_strings(const ComparisonDataset& dataset) {
    return {matrix_to_csv(dataset, /*prices=*/true), matrix_to_csv(dataset, /*prices=*/false)};
}

} // namespace priceidx
