#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ifcil::testing {

// Line wraps in a NuSMV listing carry no meaning: collapse every run of
// whitespace to one space.
inline std::string unwrap(const std::string& text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

// Splits an unwrapped listing at its section keywords.
inline std::map<std::string, std::vector<std::string>> sections(const std::string& text) {
  std::map<std::string, std::vector<std::string>> out;
  std::string flat = unwrap(text);
  std::vector<std::string> keys{"MODULE", "DEFINE", "VAR", "IVAR", "TRANS", "LTLSPEC"};
  std::istringstream in(flat);
  std::string word, current;
  std::string body;
  auto flush = [&] {
    if (!current.empty()) out[current].push_back(body);
    body.clear();
  };
  while (in >> word) {
    if (std::find(keys.begin(), keys.end(), word) != keys.end()) {
      flush();
      current = word;
      continue;
    }
    body += (body.empty() ? "" : " ") + word;
  }
  flush();
  return out;
}

}  // namespace ifcil::testing
