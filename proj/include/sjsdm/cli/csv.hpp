#pragma once

// Minimal CSV reading and writing: comma separated, first row is a header,
// optional double quotes around fields, no embedded newlines.

#include <filesystem>
#include <string>
#include <vector>

#include "sjsdm/types.hpp"

namespace sjsdm::cli {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Throws IoError if the file cannot be read and InvalidArgument on ragged rows.
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

/// Parses a numeric field; empty or "NA" fields are rejected with the cell location.
[[nodiscard]] double parse_number(const std::string& field, const std::string& where);

/// Shortest decimal text that round-trips to the same double.
[[nodiscard]] std::string format_double(double v);

/// Writes `id_name,col...` followed by one row per id, values at full precision.
void write_matrix_csv(const std::filesystem::path& path, const std::string& id_name,
                      const std::vector<std::string>& ids, const std::vector<std::string>& cols,
                      const Matrix& values);

struct LabeledMatrix {
    std::vector<std::string> ids;
    std::vector<std::string> cols;
    Matrix values;
};

[[nodiscard]] LabeledMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace sjsdm::cli
