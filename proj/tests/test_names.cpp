#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ifcil/resolve.hpp"

using namespace ifcil;
using ifcil::testing::qn;

TEST(QualifiedName, ParsesAnchoredAndRelative) {
  auto a = qn(".x.y");
  EXPECT_TRUE(a.anchored);
  EXPECT_EQ(a.path, (std::vector<std::string>{"x", "y"}));
  auto r = qn("x.y");
  EXPECT_FALSE(r.anchored);
  EXPECT_EQ(r.str(), "x.y");
  EXPECT_EQ(a.str(), ".x.y");
  EXPECT_EQ(QualifiedName::global().str(), "#");
}

TEST(QualifiedName, StructuralHelpers) {
  auto n = qn(".a.b.c");
  EXPECT_EQ(n.prefix(), qn(".a.b"));
  EXPECT_EQ(n.last(), "c");
  EXPECT_TRUE(n.has_prefix(qn(".a")));
  EXPECT_FALSE(n.has_prefix(qn(".b")));
  EXPECT_EQ(n.relative_to(qn(".a")), qn("b.c"));
  EXPECT_EQ(qn(".a").concat(qn("b.c")), n);
  EXPECT_EQ(qn(".a").parent(), QualifiedName::global());
  EXPECT_FALSE(QualifiedName::global().parent().has_value());
}

TEST(QualifiedName, RejectsMalformed) {
  EXPECT_THROW(qn(""), Error);
  EXPECT_THROW(qn("a..b"), Error);
  EXPECT_THROW(qn("a."), Error);
  EXPECT_THROW(qn("a b"), Error);
}

TEST(Identifier, Validity) {
  EXPECT_TRUE(is_valid_identifier("http_t"));
  EXPECT_TRUE(is_valid_identifier("a1"));
  EXPECT_FALSE(is_valid_identifier(""));
  EXPECT_FALSE(is_valid_identifier("a.b"));
  EXPECT_FALSE(is_valid_identifier("a(b"));
}

TEST(Eval, AnchoredNamesAreFixedPoints) {
  RuleSet g = parse_config("(type a) (block A (type a))");
  for (auto ns : {qn(".A"), QualifiedName::global(), qn(".Z.Y")})
    for (auto k : {NameKind::Type, NameKind::TypeAttribute, NameKind::Block, NameKind::Macro})
      EXPECT_EQ(eval(ns, k, qn(".a"), g), qn(".a"));
}

TEST(Eval, QualifiedLookupUnderNamespace) {
  RuleSet g = parse_config(
      "(block tree (type bird) (block nest (type egg)) (allow bird nest.egg (file (write))))");
  EXPECT_EQ(eval(qn(".tree"), NameKind::Type, qn("nest.egg"), g), qn(".tree.nest.egg"));
  EXPECT_FALSE(eval(qn(".tree.nest"), NameKind::Type, qn("bird"), g));
}

TEST(Eval, MissingLocalDeclarationIsBottom) {
  RuleSet g = parse_config("(type man) (block inhouse (type object))");
  EXPECT_FALSE(eval(qn(".inhouse"), NameKind::Type, qn("man"), g));
}

TEST(Eval, TypeFallsBackToTypeattribute) {
  RuleSet g = parse_config("(typeattribute t)");
  EXPECT_EQ(eval(QualifiedName::global(), NameKind::Type, qn("t"), g), qn(".t"));
  EXPECT_FALSE(eval(QualifiedName::global(), NameKind::Block, qn("t"), g));
}

TEST(EvalBar, WalksEnclosingBlocks) {
  RuleSet g = parse_config("(block house (type man) (block inner (type chair)))");
  EXPECT_EQ(eval_bar(qn(".house.inner"), NameKind::Type, qn("man"), g), qn(".house.man"));
}

TEST(EvalBar, StopsBeforeGlobalNamespace) {
  RuleSet g = parse_config(ifcil::testing::read_data("stranger.cil"));
  EXPECT_FALSE(eval_bar(qn(".inhouse"), NameKind::Type, qn("stranger"), g));
  EXPECT_EQ(eval_or(qn(".inhouse"), QualifiedName::global(), NameKind::Type, qn("stranger"), g), qn(".stranger"));
}

TEST(EvalBar, GlobalNamespaceItself) {
  RuleSet g = parse_config("(type a)");
  EXPECT_FALSE(eval_bar(QualifiedName::global(), NameKind::Block, qn("Z"), g));
  EXPECT_EQ(eval_bar(QualifiedName::global(), NameKind::Type, qn("a"), g), qn(".a"));
}

TEST(EvalOr, InheritThenCallExample) {
  RuleSet g = parse_config(ifcil::testing::read_data("inherit_then_call.cil"));
  auto global = QualifiedName::global();
  EXPECT_EQ(eval_or(qn(".A"), global, NameKind::Macro, qn("m"), g), qn(".m"));
  EXPECT_EQ(eval_or(qn(".B"), global, NameKind::Type, qn("a"), g), qn(".B.a"));
  EXPECT_EQ(eval_or(qn(".A"), global, NameKind::Type, qn("a"), g), qn(".a"));
}

TEST(Resolution, ResultsNameDeclaredEntities) {
  RuleSet g = parse_config(ifcil::testing::read_data("webapp.cil"));
  DeclIndex idx(g);
  for (const char* name : {"DB", "http", "other", "anon", "x", "nothing"}) {
    auto r = eval_or(qn(".in_out"), QualifiedName::global(), NameKind::Type, qn(name), idx);
    if (!r) continue;
    EXPECT_TRUE(r->anchored);
    EXPECT_TRUE(idx.declares(r->prefix(), NameKind::Type, r->last()) ||
                idx.declares(r->prefix(), NameKind::TypeAttribute, r->last()));
  }
}
