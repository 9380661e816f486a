#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ifcil {

// A dotted CIL name. Anchored names start at the global namespace `#`,
// written with a leading dot. The global namespace itself is the anchored
// name with an empty path.
struct QualifiedName {
  bool anchored = false;
  std::vector<std::string> path;

  QualifiedName() = default;
  QualifiedName(bool anchored_, std::vector<std::string> path_)
      : anchored(anchored_), path(std::move(path_)) {}

  static QualifiedName parse(std::string_view text);
  static QualifiedName global() { return {true, {}}; }
  static QualifiedName local(std::string name) { return {false, {std::move(name)}}; }

  bool is_global() const { return anchored && path.empty(); }
  bool is_simple() const { return !anchored && path.size() == 1; }
  const std::string& last() const { return path.back(); }

  QualifiedName prefix() const;
  QualifiedName child(const std::string& seg) const;
  QualifiedName concat(const QualifiedName& rel) const;
  std::optional<QualifiedName> parent() const;
  bool has_prefix(const QualifiedName& other) const;
  // Path of this name relative to `base`; requires has_prefix(base).
  QualifiedName relative_to(const QualifiedName& base) const;

  std::string str() const;

  auto operator<=>(const QualifiedName&) const = default;
  bool operator==(const QualifiedName&) const = default;
};

bool is_valid_identifier(std::string_view s);

}  // namespace ifcil

template <>
struct std::hash<ifcil::QualifiedName> {
  size_t operator()(const ifcil::QualifiedName& q) const noexcept {
    size_t h = q.anchored ? 0x9e3779b9u : 0;
    for (const auto& s : q.path) h = h * 1000003u ^ std::hash<std::string>{}(s);
    return h;
  }
};
