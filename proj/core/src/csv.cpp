#include "stopgrid/csv.hpp"

#include "stopgrid/errors.hpp"

#include <cstdio>
#include <fstream>

namespace stopgrid {

std::string fmt_g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw InvalidParameter("CsvTable: header must be nonempty");
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) {
        throw InvalidParameter("CsvTable: row width must match the header");
    }
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& os) const {
    // RFC-4180 quoting: fields containing separators or quotes are wrapped in
    // double quotes, embedded quotes doubled
    auto emit_cell = [&os](const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) {
            os << cell;
            return;
        }
        os << '"';
        for (char c : cell) {
            if (c == '"') os << '"';
            os << c;
        }
        os << '"';
    };
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            emit_cell(cells[i]);
        }
        os << '\n';
    };
    emit(header_);
    for (const auto& row : rows_) emit(row);
}

void CsvTable::write_file(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidParameter("CsvTable: cannot open " + path + " for writing");
    write(os);
}

} // namespace stopgrid
