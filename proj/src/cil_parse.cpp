#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "ifcil/cil.hpp"

namespace ifcil {

namespace {

struct SExpr {
  enum class Kind { Atom, List, Island };
  Kind kind = Kind::Atom;
  std::string text;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;
  size_t begin = 0;
  size_t end = 0;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
};

constexpr std::string_view kIslandMarker = ";IFL;";

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    while (true) {
      skip();
      if (pos_ >= src_.size()) return out;
      if (src_[pos_] == ')') fail("unbalanced `)`");
      out.push_back(read());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool at_island() const { return src_.substr(pos_, kIslandMarker.size()) == kIslandMarker; }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';' && !at_island()) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = col_;
    e.begin = pos_;
    if (at_island()) {
      for (size_t i = 0; i < kIslandMarker.size(); ++i) advance();
      size_t close = src_.find(kIslandMarker, pos_);
      if (close == std::string_view::npos) fail("unterminated ;IFL; annotation");
      e.kind = SExpr::Kind::Island;
      e.text = std::string(src_.substr(pos_, close - pos_));
      while (pos_ < close + kIslandMarker.size()) advance();
    } else if (src_[pos_] == '(') {
      e.kind = SExpr::Kind::List;
      advance();
      while (true) {
        skip();
        if (pos_ >= src_.size()) throw ParseError(e.line, e.column, "unbalanced `(`");
        if (src_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
    } else if (src_[pos_] == '"') {
      e.text += '"';
      advance();
      while (pos_ < src_.size() && src_[pos_] != '"') {
        e.text += src_[pos_];
        advance();
      }
      if (pos_ >= src_.size()) fail("unterminated string");
      e.text += '"';
      advance();
    } else {
      while (pos_ < src_.size()) {
        char c = src_[pos_];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == '"') break;
        e.text += c;
        advance();
      }
    }
    e.end = pos_;
    return e;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class ConfigParser {
 public:
  ConfigParser(std::string_view src, Diagnostics* diags) : src_(src), diags_(diags) {}

  RuleSet run() {
    for (const auto& e : Reader(src_).read_all()) form(e, QualifiedName::global(), false);
    return std::move(out_);
  }

 private:
  [[noreturn]] static void fail(const SExpr& e, const std::string& msg) {
    throw ParseError(e.line, e.column, msg);
  }

  void emit(const QualifiedName& ns, Rule r) { out_.add({ns, std::move(r)}); }

  static const std::string& atom(const SExpr& e, const char* what) {
    if (!e.is_atom() || e.text.empty() || e.text.front() == '"') fail(e, std::string("expected ") + what);
    return e.text;
  }

  static QualifiedName name(const SExpr& e, const char* what) {
    try {
      return QualifiedName::parse(atom(e, what));
    } catch (const ParseError& err) {
      fail(e, err.what());
    }
  }

  static std::string identifier(const SExpr& e, const char* what) {
    const std::string& s = atom(e, what);
    if (!is_valid_identifier(s)) fail(e, "invalid identifier `" + s + "`");
    return s;
  }

  void declare(const SExpr& e, const QualifiedName& ns, const std::string& space, const std::string& n) {
    if (!declared_.insert(ns.str() + "\x1f" + space + "\x1f" + n).second)
      fail(e, "duplicate declaration of `" + n + "` in " + ns.str());
  }

  void unsupported(const SExpr& e, const QualifiedName& ns, const std::string& why) {
    warn(diags_, std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + why + "; skipped");
    emit(ns, Unsupported{std::string(src_.substr(e.begin, e.end - e.begin))});
  }

  static size_t arity_check(const SExpr& e, size_t n, const char* form) {
    if (e.items.size() != n) fail(e, std::string("`") + form + "` expects " + std::to_string(n - 1) + " arguments");
    return n;
  }

  void form(const SExpr& e, const QualifiedName& ns, bool in_macro) {
    if (e.kind == SExpr::Kind::Island) {
      IflItem item = island(e);
      if (auto* r = std::get_if<LabeledRequirement>(&item)) {
        emit(ns, IflRule{std::move(*r)});
        return;
      }
      fail(e, "a refinement may only appear inside call or blockinherit");
    }
    if (e.is_atom()) fail(e, "unexpected atom `" + e.text + "` at rule position");
    if (e.items.empty() || !e.items[0].is_atom()) {
      unsupported(e, ns, "malformed form");
      return;
    }
    const std::string& head = e.items[0].text;
    if (head == "block") {
      if (in_macro) fail(e, "block declared inside a macro");
      if (e.items.size() < 2) fail(e, "block needs a name");
      std::string n = identifier(e.items[1], "block name");
      declare(e, ns, "block", n);
      emit(ns, BlockDecl{n});
      for (size_t i = 2; i < e.items.size(); ++i) form(e.items[i], ns.child(n), false);
    } else if (head == "macro") {
      if (in_macro) fail(e, "macro declared inside a macro");
      if (e.items.size() < 3 || !e.items[2].is_list()) fail(e, "macro needs a name and a parameter list");
      std::vector<std::string> params;
      // `(macro m (type x) ...)` is accepted as a single-parameter shorthand.
      std::vector<SExpr> plist = e.items[2].items;
      if (!plist.empty() && plist[0].is_atom()) plist = {e.items[2]};
      for (const auto& p : plist) {
        if (!p.is_list() || p.items.size() != 2 || !p.items[0].is_atom()) fail(p, "malformed macro parameter");
        if (p.items[0].text != "type") fail(p, "macro parameter kind `" + p.items[0].text + "` is not supported");
        params.push_back(identifier(p.items[1], "parameter name"));
      }
      std::set<std::string> uniq(params.begin(), params.end());
      if (uniq.size() != params.size()) fail(e, "duplicate macro parameter");
      std::string n = identifier(e.items[1], "macro name");
      declare(e, ns, "macro", n);
      emit(ns, MacroDecl{n, params});
      for (size_t i = 3; i < e.items.size(); ++i) form(e.items[i], ns.child(n), true);
    } else if (head == "type" || head == "typeattribute") {
      arity_check(e, 2, head.c_str());
      std::string n = identifier(e.items[1], "name");
      declare(e, ns, "type", n);
      if (head == "type")
        emit(ns, TypeDecl{n});
      else
        emit(ns, TypeAttributeDecl{n});
    } else if (head == "allow") {
      arity_check(e, 4, "allow");
      const SExpr& perm = e.items[3];
      if (!perm.is_list() || perm.items.size() != 2 || !perm.items[0].is_atom() || !perm.items[1].is_list()) {
        unsupported(e, ns, "allow without a literal (class (perms)) list");
        return;
      }
      Allow a{name(e.items[1], "source"), name(e.items[2], "target"), identifier(perm.items[0], "class"), {}};
      for (const auto& p : perm.items[1].items) {
        if (!p.is_atom()) {
          unsupported(e, ns, "allow with a permission expression");
          return;
        }
        a.perms.push_back(identifier(p, "permission"));
      }
      if (a.perms.empty()) fail(e, "allow with an empty permission list");
      std::sort(a.perms.begin(), a.perms.end());
      a.perms.erase(std::unique(a.perms.begin(), a.perms.end()), a.perms.end());
      emit(ns, std::move(a));
    } else if (head == "typeattributeset") {
      arity_check(e, 3, "typeattributeset");
      emit(ns, TypeAttributeSet{name(e.items[1], "typeattribute"), expr(e.items[2])});
    } else if (head == "call") {
      if (e.items.size() < 2) fail(e, "call needs a macro name");
      Call c{name(e.items[1], "macro name"), {}, {}};
      size_t i = 2;
      if (i < e.items.size() && e.items[i].is_list()) {
        for (const auto& a : e.items[i].items) {
          if (!a.is_atom()) fail(a, "only type arguments are supported in calls");
          c.args.push_back(name(a, "argument"));
        }
        ++i;
      }
      c.refinements = refinements(e, i);
      emit(ns, std::move(c));
    } else if (head == "blockinherit") {
      if (e.items.size() < 2) fail(e, "blockinherit needs a block name");
      BlockInherit b{name(e.items[1], "block name"), {}};
      b.refinements = refinements(e, 2);
      emit(ns, std::move(b));
    } else {
      unsupported(e, ns, "unsupported construct `" + head + "`");
    }
  }

  std::vector<Refinement> refinements(const SExpr& e, size_t from) {
    std::vector<Refinement> out;
    for (size_t i = from; i < e.items.size(); ++i) {
      const SExpr& it = e.items[i];
      if (it.kind != SExpr::Kind::Island) fail(it, "unexpected argument");
      IflItem item = island(it);
      auto* r = std::get_if<Refinement>(&item);
      if (!r) fail(it, "expected a refinement `(new:old) R`");
      out.push_back(std::move(*r));
    }
    return out;
  }

  static IflItem island(const SExpr& e) {
    try {
      return parse_ifl(e.text);
    } catch (const ParseError& err) {
      fail(e, err.what());
    }
  }

  static AttrExpr expr(const SExpr& e) {
    if (e.is_atom()) return AttrExpr::leaf(name(e, "typeattribute operand"));
    if (!e.is_list() || e.items.empty()) fail(e, "malformed typeattribute expression");
    static const std::map<std::string, std::pair<AttrExpr::Op, size_t>> ops = {
        {"and", {AttrExpr::Op::And, 2}},
        {"or", {AttrExpr::Op::Or, 2}},
        {"xor", {AttrExpr::Op::Xor, 2}},
        {"not", {AttrExpr::Op::Not, 1}},
    };
    AttrExpr out;
    if (e.items[0].is_atom()) {
      auto it = ops.find(e.items[0].text);
      if (it != ops.end()) {
        if (e.items.size() != it->second.second + 1) fail(e, "wrong operand count for `" + it->first + "`");
        out.op = it->second.first;
        for (size_t i = 1; i < e.items.size(); ++i) out.operands.push_back(expr(e.items[i]));
        return out;
      }
    }
    out.op = AttrExpr::Op::List;
    for (const auto& i : e.items) out.operands.push_back(expr(i));
    return out;
  }

  std::string_view src_;
  Diagnostics* diags_;
  RuleSet out_;
  std::set<std::string> declared_;
};

}  // namespace

RuleSet parse_config(std::string_view text, Diagnostics* diags) { return ConfigParser(text, diags).run(); }

}  // namespace ifcil
