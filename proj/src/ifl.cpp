#include "ifcil/ifl.hpp"

#include <algorithm>
#include <cctype>

#include "ifcil/diagnostics.hpp"

namespace ifcil {

bool OpSet::subset_of(const OpSet& other) const {
  if (other.all) return true;
  if (all) return false;
  return std::includes(other.ops.begin(), other.ops.end(), ops.begin(), ops.end());
}

OpSet OpSet::unite(const OpSet& other) const {
  if (all || other.all) return any();
  OpSet r = *this;
  r.ops.insert(other.ops.begin(), other.ops.end());
  return r;
}

OpSet OpSet::intersect(const OpSet& other) const {
  if (all) return other;
  if (other.all) return *this;
  OpSet r = of({});
  std::set_intersection(ops.begin(), ops.end(), other.ops.begin(), other.ops.end(),
                        std::inserter(r.ops, r.ops.end()));
  return r;
}

namespace {

enum class Tok { LParen, RParen, Colon, Tilde, Star, Arrow, Ident, End };

struct Token {
  Tok tok = Tok::End;
  std::string text;
  Step step;
  size_t offset = 0;
};

bool ident_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '.' || c == '-';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      Token t;
      t.offset = pos_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      switch (c) {
        case '(': t.tok = Tok::LParen; ++pos_; break;
        case ')': t.tok = Tok::RParen; ++pos_; break;
        case ':': t.tok = Tok::Colon; ++pos_; break;
        case '~': t.tok = Tok::Tilde; ++pos_; break;
        case '*': t.tok = Tok::Star; ++pos_; break;
        case '>':
          t.tok = Tok::Arrow;
          t.step = {Arrow::Single, OpSet::any()};
          ++pos_;
          break;
        case '+':
        case '[': t = arrow(); break;
        default:
          if (!ident_char(c)) fail("unexpected character `" + std::string(1, c) + "`");
          t.tok = Tok::Ident;
          while (pos_ < src_.size() && ident_char(src_[pos_])) t.text += src_[pos_++];
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("IFL: " + msg + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  Token arrow() {
    Token t;
    t.tok = Tok::Arrow;
    t.offset = pos_;
    t.step.arrow = Arrow::Single;
    if (src_[pos_] == '+') {
      t.step.arrow = Arrow::Multi;
      ++pos_;
    }
    if (pos_ < src_.size() && src_[pos_] == '[') {
      ++pos_;
      t.step.ops = OpSet::of({});
      std::string cur;
      while (true) {
        if (pos_ >= src_.size()) fail("unterminated operation list");
        char c = src_[pos_++];
        if (c == ']') break;
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
          if (!cur.empty()) t.step.ops.ops.insert(std::exchange(cur, {}));
        } else if (ident_char(c) && c != '.') {
          cur += c;
        } else {
          fail("bad character in operation list");
        }
      }
      if (!cur.empty()) t.step.ops.ops.insert(cur);
      if (t.step.ops.ops.empty()) fail("empty operation list");
    }
    if (pos_ >= src_.size() || src_[pos_] != '>') fail("expected `>`");
    ++pos_;
    return t;
  }

  std::string_view src_;
  size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  IflItem item() {
    expect(Tok::LParen, "`(` opening a label");
    std::string label = ident("label");
    std::string target;
    bool refinement = false;
    if (peek().tok == Tok::Colon) {
      next();
      refinement = true;
      target = ident("refined label");
    }
    expect(Tok::RParen, "`)` closing the label");
    Requirement r = requirement();
    end();
    if (refinement) return Refinement{label, target, std::move(r)};
    return LabeledRequirement{label, std::move(r)};
  }

  Requirement requirement() {
    if (peek().tok == Tok::Tilde) {
      next();
      return Requirement::prohibit(kind());
    }
    Kind k = kind();
    if (peek().tok == Tok::Colon) {
      next();
      return Requirement::constraint(std::move(k), kind());
    }
    return Requirement::exists(std::move(k));
  }

  Kind kind() {
    if (peek().tok == Tok::LParen) {
      next();
      Kind k = kind();
      expect(Tok::RParen, "`)` closing a kind");
      return k;
    }
    Kind k;
    k.nodes.push_back(node());
    while (peek().tok == Tok::Arrow) {
      k.steps.push_back(next().step);
      k.nodes.push_back(node());
    }
    if (k.steps.empty()) fail("a kind needs at least one arrow");
    return k;
  }

  void end() {
    if (peek().tok != Tok::End) fail("trailing input");
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("IFL: " + msg + " at offset " + std::to_string(peek().offset));
  }

  void expect(Tok t, const char* what) {
    if (peek().tok != t) fail(std::string("expected ") + what);
    next();
  }

  std::string ident(const char* what) {
    if (peek().tok != Tok::Ident) fail(std::string("expected ") + what);
    return next().text;
  }

  NodeRef node() {
    if (peek().tok == Tok::Star) {
      next();
      return NodeRef::any();
    }
    if (peek().tok != Tok::Ident) fail("expected a node");
    return NodeRef::named(QualifiedName::parse(next().text));
  }

  std::vector<Token> toks_;
  size_t i_ = 0;
};

std::string ops_text(const OpSet& o) {
  std::string s;
  for (const auto& op : o.ops) {
    if (!s.empty()) s += ' ';
    s += op;
  }
  return s;
}

}  // namespace

IflItem parse_ifl(std::string_view text) { return Parser(text).item(); }

Kind parse_kind(std::string_view text) {
  Parser p(text);
  Kind k = p.kind();
  p.end();
  return k;
}

Requirement parse_requirement(std::string_view text) {
  Parser p(text);
  Requirement r = p.requirement();
  p.end();
  return r;
}

std::string to_string(const NodeRef& n) { return n.wildcard ? "*" : n.name.str(); }

std::string to_string(const Step& s) {
  std::string out = s.arrow == Arrow::Multi ? "+" : "";
  if (!s.ops.all) out += "[" + ops_text(s.ops) + "]";
  return out + ">";
}

std::string to_string(const Kind& k) {
  std::string out;
  for (size_t i = 0; i < k.nodes.size(); ++i) {
    if (i > 0) out += " " + to_string(k.steps[i - 1]) + " ";
    out += to_string(k.nodes[i]);
  }
  return out;
}

std::string to_string(const Requirement& r) {
  switch (r.type) {
    case Requirement::Type::Exists: return to_string(r.kind);
    case Requirement::Type::Prohibit: return "~ " + to_string(r.kind);
    case Requirement::Type::Constraint: return to_string(r.kind) + " : " + to_string(r.consequent);
  }
  return {};
}

std::string to_string(const LabeledRequirement& r) {
  return "(" + r.label + ") " + to_string(r.requirement);
}

std::string to_string(const Refinement& r) {
  return "(" + r.label + ":" + r.target + ") " + to_string(r.requirement);
}

std::vector<QualifiedName> named_nodes(const Requirement& r) {
  std::vector<QualifiedName> out;
  for (const Kind* k : {&r.kind, &r.consequent})
    for (const auto& n : k->nodes)
      if (!n.wildcard) out.push_back(n.name);
  return out;
}

Requirement substitute(const Requirement& r, const std::map<std::string, QualifiedName>& binding) {
  return map_nodes(r, [&](const QualifiedName& q) {
    if (q.is_simple()) {
      auto it = binding.find(q.last());
      if (it != binding.end()) return it->second;
    }
    return q;
  });
}

}  // namespace ifcil
