#include <gtest/gtest.h>

#include <regex>

#include "fixtures.hpp"

using namespace ifcil;
using ifcil::testing::qn;
using ifcil::testing::read_data;

namespace {

template <class T>
size_t count_of(const RuleSet& g) {
  size_t n = 0;
  for (const auto& r : g) n += std::holds_alternative<T>(r.rule);
  return n;
}

size_t refinement_count(const RuleSet& g) {
  size_t n = 0;
  for (const auto& r : g) {
    if (auto* c = std::get_if<Call>(&r.rule)) n += c->refinements.size();
    if (auto* b = std::get_if<BlockInherit>(&r.rule)) n += b->refinements.size();
  }
  return n;
}

const std::vector<std::string> kFixtures{
    "webapp.cil",          "webapp_normal.cil",      "webapp_mutated.cil",     "nested_macro_arg.cil",
    "inherit_then_call.cil", "inherit_then_call_normal.cil", "stranger.cil", "self_param.cil",
    "animal.cil",        "attr_cycle.cil",       "macro_local_type.cil"};

}  // namespace

TEST(Parse, EmptyInput) { EXPECT_EQ(parse_config("").size(), 0u); }

TEST(Parse, CommentsOnly) { EXPECT_EQ(parse_config("; nothing here\n;; still nothing\n").size(), 0u); }

TEST(Parse, BlockBodyIsLocatedUnderExtendedNamespace) {
  RuleSet g = parse_config("(block A (type a))");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.rules()[0], (LocatedRule{QualifiedName::global(), BlockDecl{"A"}}));
  EXPECT_EQ(g.rules()[1], (LocatedRule{qn(".A"), TypeDecl{"a"}}));
}

TEST(Parse, WebAppCounts) {
  RuleSet g = parse_config(read_data("webapp.cil"));
  EXPECT_EQ(g.size(), 21u);
  EXPECT_EQ(count_of<IflRule>(g), 4u);
  EXPECT_EQ(refinement_count(g), 3u);
  EXPECT_EQ(count_of<MacroDecl>(g), 2u);
  EXPECT_EQ(count_of<Call>(g), 3u);
  EXPECT_EQ(count_of<Allow>(g), 5u);
  EXPECT_EQ(count_of<TypeDecl>(g), 5u);
}

TEST(Parse, IslandsInsideCallsBecomeRefinements) {
  RuleSet g = parse_config(read_data("webapp.cil"));
  std::vector<std::string> labels;
  for (const auto& r : g)
    if (auto* c = std::get_if<Call>(&r.rule))
      for (const auto& ref : c->refinements) labels.push_back(ref.label + ":" + ref.target);
  EXPECT_EQ(labels, (std::vector<std::string>{"F1R:F1", "F2R:F2", "S1R:S1"}));
}

TEST(Parse, MacroParameters) {
  RuleSet g = parse_config("(macro m((type x) (type y)) (allow x y (file (read))))");
  auto* m = std::get_if<MacroDecl>(&g.rules()[0].rule);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->params, (std::vector<std::string>{"x", "y"}));
  RuleSet shorthand = parse_config("(macro m(type x) (allow x x (file (read))))");
  EXPECT_EQ(std::get<MacroDecl>(shorthand.rules()[0].rule).params, (std::vector<std::string>{"x"}));
  RuleSet none = parse_config("(macro m () (type a))");
  EXPECT_TRUE(std::get<MacroDecl>(none.rules()[0].rule).params.empty());
}

TEST(Parse, AllowPermissionsAreSortedSets) {
  RuleSet g = parse_config("(allow a b (file (write read write)))");
  auto a = std::get<Allow>(g.rules()[0].rule);
  EXPECT_EQ(a.cls, "file");
  EXPECT_EQ(a.perms, (std::vector<std::string>{"read", "write"}));
}

TEST(Parse, AttributeExpressions) {
  RuleSet g = parse_config("(typeattributeset t (and (or a b) (xor (not c) d)))");
  auto s = std::get<TypeAttributeSet>(g.rules()[0].rule);
  EXPECT_EQ(s.expr.op, AttrExpr::Op::And);
  EXPECT_EQ(print_expr(s.expr), "(and (or a b) (xor (not c) d))");
}

TEST(Parse, UnknownConstructsWarnAndSurvive) {
  Diagnostics d;
  RuleSet g = parse_config("(role r)\n(type a)\n(neverallow a a (file (read)))", &d);
  EXPECT_EQ(count_of<Unsupported>(g), 2u);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_NE(d[0].message.find("role"), std::string::npos);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_config("(type a"), ParseError);
  EXPECT_THROW(parse_config("(type a))"), ParseError);
  EXPECT_THROW(parse_config("(macro m((role r)) (type a))"), ParseError);
  EXPECT_THROW(parse_config("(type a) (type a)"), ParseError);
  EXPECT_THROW(parse_config("(type a) (typeattribute a)"), ParseError);
  EXPECT_THROW(parse_config("(block A (type a) (type a))"), ParseError);
  EXPECT_THROW(parse_config(";IFL; (F) a > ;IFL;"), ParseError);
  EXPECT_THROW(parse_config(";IFL; (F) a [] > b ;IFL;"), ParseError);
  EXPECT_THROW(parse_config(";IFL; a > b ;IFL;"), ParseError);
  EXPECT_THROW(parse_config(";IFL; (F) a > b"), ParseError);
  EXPECT_THROW(parse_config("(macro m () (macro n () (type a)))"), ParseError);
}

TEST(Parse, SameNameInDifferentNamespacesIsFine) {
  EXPECT_NO_THROW(parse_config("(type a) (block A (type a)) (block B (type a))"));
}

TEST(Parse, ErrorsCarryPositions) {
  try {
    parse_config("(type a)\n(type b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 1);
  }
}

class FixtureRoundTrip : public ::testing::TestWithParam<std::string> {};

TEST_P(FixtureRoundTrip, PrintThenParseIsIdentity) {
  RuleSet g = parse_config(read_data(GetParam()));
  std::string printed = print_config(g);
  RuleSet again = parse_config(printed);
  EXPECT_EQ(again, g) << printed;
  EXPECT_EQ(print_config(again), printed);
}

TEST_P(FixtureRoundTrip, StrippingIslandsLeavesCilRules) {
  std::string text = read_data(GetParam());
  std::string stripped = std::regex_replace(text, std::regex(";IFL;[^;]*;IFL;"), "");
  EXPECT_EQ(parse_config(stripped), strip_ifl(parse_config(text)));
}

INSTANTIATE_TEST_SUITE_P(Fixtures, FixtureRoundTrip, ::testing::ValuesIn(kFixtures),
                         [](const auto& info) {
                           std::string n = info.param.substr(0, info.param.find('.'));
                           return n;
                         });

TEST(Print, NormalFormRendersAnchoredNamesWithDot) {
  RuleSet g = parse_config("(allow .a .A.b (file (read)))");
  EXPECT_EQ(print_config(g), "(allow .a .A.b (file (read)))\n");
}
