#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace hedgekit::csv {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
    bool has_columns(const std::vector<std::string>& names) const;
};

Table read_file(const std::filesystem::path& path);

// Full-precision decimal formatting (shortest round-trip representation).
std::string format_double(double v);

void write_file(const std::filesystem::path& path, const std::string& header,
                const std::vector<std::string>& lines);

}  // namespace hedgekit::csv
