#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stopgrid {

/// Formats a double with 12 significant digits ("%.12g").
std::string fmt_g12(double x);

/// Rectangular table serialized RFC-4180 style: comma separators, LF line
/// endings, '.' decimal separator, deterministic row order (insertion order).
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> row);
    void write(std::ostream& os) const;
    void write_file(const std::string& path) const;

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace stopgrid
