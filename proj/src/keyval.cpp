// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/keyval.hpp"

#include <fstream>
#include <sstream>

#include "ideal/errors.hpp"

namespace ideal {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> parse_keyval_text(const std::string& text,
                                                     const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> read_keyval(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_keyval_text(ss.str(), path);
}

void write_keyval(const std::string& path, const std::map<std::string, std::string>& kv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ValidationError("missing key: " + key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key " + key + ": not a number: " + it->second);
    }
}

long long kv_int(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ValidationError("missing key: " + key);
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key " + key + ": not an integer: " + it->second);
    }
}

}  // namespace ideal
