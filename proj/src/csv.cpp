// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/csv.hpp"

#include <sstream>

namespace ideal {

namespace {

// One CSV record, honoring quoted fields (doubled quotes escape).
std::vector<std::string> split_record(const std::string& line, const std::string& origin,
                                      std::size_t lineno) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!cur.empty())
                throw ValidationError(origin + ":" + std::to_string(lineno) +
                                      ": quote inside unquoted field");
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw ValidationError(origin + ":" + std::to_string(lineno) + ": unterminated quote");
    cells.push_back(cur);
    return cells;
}

}  // namespace

Table read_csv_text(const std::string& text, const std::string& origin) {
    Table t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && t.header.empty()) continue;
        auto cells = split_record(line, origin, lineno);
        if (t.header.empty()) {
            t.header = std::move(cells);
        } else {
            if (cells.size() != t.header.size())
                throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected " +
                                      std::to_string(t.header.size()) + " fields, got " +
                                      std::to_string(cells.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.header.empty()) throw ValidationError(origin + ": empty file");
    return t;
}

Table read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_csv_text(ss.str(), path);
}

std::string csv_escape(const std::string& field) {
    bool needs = false;
    for (char c : field)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') { needs = true; break; }
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw ValidationError("cannot write " + path);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
        if (j) out_ << ',';
        out_ << csv_escape(cells[j]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) throw ValidationError("write failed: " + path_);
}

}  // namespace ideal
