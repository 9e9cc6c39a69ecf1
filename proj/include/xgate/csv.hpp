#pragma once

// CSV output with a versioned schema comment on the first line, e.g.
//   # xgate-csv v1 sweep
// Doubles are written with shortest round-trip formatting so identical runs
// produce byte-identical files and parsers recover exact values.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace xgate {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: bad number '" + std::string(s) + "'");
    return v;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& schema) : out_(path) {
        if (!out_) throw std::runtime_error("csv: cannot open '" + path.string() + "' for write");
        out_ << "# xgate-csv v1 " << schema << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void flush() { out_.flush(); }

  private:
    std::ofstream out_;
};

struct CsvFile {
    std::string schema;               // from the "# xgate-csv v1 <schema>" line
    std::vector<std::string> header;  // first non-comment row
    std::vector<std::vector<std::string>> rows;
};

inline CsvFile read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path.string() + "'");
    CsvFile file;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string tag = "# xgate-csv v1 ";
            if (line.rfind(tag, 0) == 0) file.schema = line.substr(tag.size());
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (!have_header) {
            file.header = std::move(cells);
            have_header = true;
        } else {
            file.rows.push_back(std::move(cells));
        }
    }
    return file;
}

}  // namespace xgate
