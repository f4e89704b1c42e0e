#include "sjsdm/cli/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sjsdm/error.hpp"

namespace sjsdm::cli {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    out.push_back(std::move(field));
    for (auto& f : out) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw InvalidArgument(path.filename().string() + " line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(table.header.size()) +
                                  " fields, found " + std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw InvalidArgument("'" + path.string() + "' is empty");
    return table;
}

double parse_number(const std::string& field, const std::string& where) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (field.empty() || res.ec != std::errc() || res.ptr != last)
        throw InvalidArgument("non-numeric or missing value '" + field + "' at " + where);
    return v;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_matrix_csv(const std::filesystem::path& path, const std::string& id_name,
                      const std::vector<std::string>& ids, const std::vector<std::string>& cols,
                      const Matrix& values) {
    if (static_cast<Index>(ids.size()) != values.rows() || static_cast<Index>(cols.size()) != values.cols())
        throw DimensionMismatch("labels do not match the matrix written to " + path.string());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << id_name;
    for (const auto& c : cols) out << ',' << c;
    out << '\n';
    for (Index i = 0; i < values.rows(); ++i) {
        out << ids[static_cast<std::size_t>(i)];
        for (Index j = 0; j < values.cols(); ++j) out << ',' << format_double(values(i, j));
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    LabeledMatrix out;
    out.cols.assign(t.header.begin() + 1, t.header.end());
    out.values.resize(static_cast<Index>(t.rows.size()), static_cast<Index>(out.cols.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        out.ids.push_back(t.rows[i][0]);
        for (std::size_t j = 0; j < out.cols.size(); ++j)
            out.values(static_cast<Index>(i), static_cast<Index>(j)) =
                parse_number(t.rows[i][j + 1], path.filename().string() + " row " +
                                                   std::to_string(i + 2) + " column '" + out.cols[j] + "'");
    }
    return out;
}

}  // namespace sjsdm::cli
