// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ideal/errors.hpp"

namespace ideal {

// Rectangular text table: header row plus string cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t ncol() const { return header.size(); }
    std::size_t nrow() const { return rows.size(); }

    // Column index by name, -1 if absent.
    int col(const std::string& name) const {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == name) return static_cast<int>(j);
        return -1;
    }
};

Table read_csv(const std::string& path);
Table read_csv_text(const std::string& text, const std::string& origin);

// Fixed "%.12g" rendering so file bytes do not depend on locale or
// stream state; reruns must be byte-identical.
inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

// Quotes fields per RFC 4180 when they contain separators.
std::string csv_escape(const std::string& field);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void row(const std::vector<std::string>& cells);
    void close();

private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace ideal
