#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace memsched {

// Shortest decimal form that round-trips binary64 exactly (17 significant
// digits).
std::string format_g17(double x);

double parse_double(const std::string& s);

// Minimal comma-separated writer; cells must not contain commas or newlines.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    CsvWriter& cell(const std::string& s);
    CsvWriter& cell(const char* s) { return cell(std::string(s)); }
    CsvWriter& cell(double x) { return cell(format_g17(x)); }
    CsvWriter& cell(int x) { return cell(std::to_string(x)); }
    CsvWriter& cell(long x) { return cell(std::to_string(x)); }
    CsvWriter& cell(std::uint64_t x) { return cell(std::to_string(x)); }
    CsvWriter& cell(bool b) { return cell(std::string(b ? "1" : "0")); }
    void end_row();

private:
    std::ostream& out_;
    bool row_open_ = false;
};

// Parses a whole CSV document into rows of cells (no quoting rules; matches
// what CsvWriter emits).
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

}  // namespace memsched
