// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <map>
#include <string>

namespace ideal {

// Flat key=value text config. '#' starts a comment, blank lines skipped,
// whitespace around keys and values trimmed. Later keys overwrite earlier.
std::map<std::string, std::string> read_keyval(const std::string& path);
std::map<std::string, std::string> parse_keyval_text(const std::string& text,
                                                     const std::string& origin);

void write_keyval(const std::string& path,
                  const std::map<std::string, std::string>& kv);

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key);
long long kv_int(const std::map<std::string, std::string>& kv, const std::string& key);

}  // namespace ideal
