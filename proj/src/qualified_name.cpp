#include "ifcil/qualified_name.hpp"

#include <cctype>

#include "ifcil/diagnostics.hpp"

namespace ifcil {

bool is_valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_' || c == '-')) return false;
  }
  return true;
}

QualifiedName QualifiedName::parse(std::string_view text) {
  QualifiedName q;
  if (!text.empty() && text.front() == '.') {
    q.anchored = true;
    text.remove_prefix(1);
  }
  size_t start = 0;
  while (true) {
    size_t dot = text.find('.', start);
    std::string_view seg = text.substr(start, dot == std::string_view::npos ? text.npos : dot - start);
    if (!is_valid_identifier(seg)) throw ParseError("malformed name `" + std::string(text) + "`");
    q.path.emplace_back(seg);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return q;
}

QualifiedName QualifiedName::prefix() const {
  QualifiedName q = *this;
  if (!q.path.empty()) q.path.pop_back();
  return q;
}

QualifiedName QualifiedName::child(const std::string& seg) const {
  QualifiedName q = *this;
  q.path.push_back(seg);
  return q;
}

QualifiedName QualifiedName::concat(const QualifiedName& rel) const {
  QualifiedName q = *this;
  q.path.insert(q.path.end(), rel.path.begin(), rel.path.end());
  return q;
}

std::optional<QualifiedName> QualifiedName::parent() const {
  if (path.empty()) return std::nullopt;
  return prefix();
}

bool QualifiedName::has_prefix(const QualifiedName& other) const {
  if (anchored != other.anchored || other.path.size() > path.size()) return false;
  for (size_t i = 0; i < other.path.size(); ++i)
    if (path[i] != other.path[i]) return false;
  return true;
}

QualifiedName QualifiedName::relative_to(const QualifiedName& base) const {
  return {false, std::vector<std::string>(path.begin() + base.path.size(), path.end())};
}

std::string QualifiedName::str() const {
  if (is_global()) return "#";
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i > 0 || anchored) out += '.';
    out += path[i];
  }
  return out;
}

}  // namespace ifcil
