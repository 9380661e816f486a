#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace ifcil;
using ifcil::testing::Pipeline;
using ifcil::testing::qn;
using ifcil::testing::read_data;

namespace {

using Arc = std::tuple<std::string, std::string, std::string>;

std::set<Arc> permission_arcs(const Graph& g) {
  std::set<Arc> out;
  for (const auto& [k, perms] : g.arcs) {
    std::string ops;
    for (const auto& [cls, op] : perms) ops += (ops.empty() ? "" : ",") + op;
    out.insert({g.nodes.names[k.first].str(), ops, g.nodes.names[k.second].str()});
  }
  return out;
}

std::set<Arc> flow_arcs(const Ifd& ifd, bool types_only) {
  std::set<Arc> out;
  for (const auto& [k, ops] : ifd.arcs) {
    if (types_only && !(ifd.nodes.is_type[k.first] && ifd.nodes.is_type[k.second])) continue;
    std::string s;
    for (const auto& o : ops) s += (s.empty() ? "" : ",") + o;
    out.insert({ifd.nodes.names[k.first].str(), s, ifd.nodes.names[k.second].str()});
  }
  return out;
}

std::set<std::string> members(const Graph& g, const std::string& attr) {
  std::set<std::string> out;
  for (int m : g.nodes.ta[g.nodes.id(qn(attr))]) out.insert(g.nodes.names[m].str());
  return out;
}

}  // namespace

TEST(Graph, TwoBlockExample) {
  Pipeline p(read_data("inherit_then_call.cil"));
  EXPECT_EQ(p.graph.nodes.names, (std::vector<QualifiedName>{qn(".A.b"), qn(".B.a"), qn(".B.b"), qn(".a")}));
  EXPECT_EQ(permission_arcs(p.graph), (std::set<Arc>{{".a", "read", ".A.b"}, {".B.a", "read", ".B.b"}}));
}

TEST(Graph, WebAppPermissionArcs) {
  Pipeline p = Pipeline::fixture("webapp.cil");
  EXPECT_EQ(permission_arcs(p.graph), (std::set<Arc>{
                                          {".anon", "read", ".DB"},
                                          {".http", "read", ".anon"},
                                          {".http", "write", ".DB"},
                                          {".http", "read", ".other"},
                                          {".http", "read", ".home"},
                                          {".http", "read,write", ".net"},
                                      }));
}

TEST(Graph, NegatedAttribute) {
  Pipeline p = Pipeline::fixture("webapp.cil");
  EXPECT_EQ(members(p.graph, ".other"), (std::set<std::string>{".home"}));
  for (int t : p.graph.nodes.types()) EXPECT_EQ(p.graph.nodes.ta[t], (std::set<int>{t}));
}

TEST(Graph, EmptyConfiguration) {
  Graph g = build_graph(RuleSet{});
  EXPECT_EQ(g.nodes.size(), 0u);
  EXPECT_TRUE(g.arcs.empty());
}

TEST(Graph, AttributeWithoutSetIsEmpty) {
  Pipeline p("(type a) (typeattribute t)");
  EXPECT_TRUE(members(p.graph, ".t").empty());
}

TEST(Graph, AttributeExpressionOperators) {
  Pipeline p(
      "(type a) (type b) (type c) (typeattribute x) (typeattribute y) (typeattribute z) (typeattribute w)"
      "(typeattributeset x (a b)) (typeattributeset y (and x (not a)))"
      "(typeattributeset z (xor x (b c))) (typeattributeset w a) (typeattributeset w c)");
  EXPECT_EQ(members(p.graph, ".x"), (std::set<std::string>{".a", ".b"}));
  EXPECT_EQ(members(p.graph, ".y"), (std::set<std::string>{".b"}));
  EXPECT_EQ(members(p.graph, ".z"), (std::set<std::string>{".a", ".c"}));
  EXPECT_EQ(members(p.graph, ".w"), (std::set<std::string>{".a", ".c"}));
}

TEST(Graph, CyclicAttributesArePrunedWithWarning) {
  Pipeline p = Pipeline::fixture("attr_cycle.cil");
  EXPECT_EQ(members(p.graph, ".b"), (std::set<std::string>{".a"}));
  EXPECT_EQ(members(p.graph, ".c"), (std::set<std::string>{".a"}));
  EXPECT_EQ(p.graph.cyclic, (std::set<QualifiedName>{qn(".b"), qn(".c")}));
  size_t warnings = 0;
  for (const auto& d : p.diags) warnings += d.message.find("cyclic typeattribute") != std::string::npos;
  EXPECT_EQ(warnings, 1u);
}

TEST(Graph, CyclePruningIndependentOfDeclarationOrder) {
  Pipeline a("(type a) (typeattribute b) (typeattribute c) (typeattributeset b (not c)) (typeattributeset c b)");
  Pipeline b("(type a) (typeattribute c) (typeattribute b) (typeattributeset c b) (typeattributeset b (not c))");
  EXPECT_EQ(members(a.graph, ".b"), members(b.graph, ".b"));
  EXPECT_EQ(members(a.graph, ".c"), members(b.graph, ".c"));
}

TEST(Graph, AddingTypesNeverShrinksAcyclicAttributes) {
  std::string base = "(type a) (type b) (typeattribute x) (typeattributeset x (or a (not b)))";
  Pipeline small(base);
  Pipeline big(base + " (type c) (type d)");
  auto s = members(small.graph, ".x");
  auto l = members(big.graph, ".x");
  EXPECT_TRUE(std::includes(l.begin(), l.end(), s.begin(), s.end()));
}

TEST(Graph, ClosureIsStable) {
  Pipeline p = Pipeline::fixture("webapp.cil");
  const Graph& g = p.graph;
  for (const auto& [k, perms] : g.arcs)
    for (int s : g.nodes.ta[k.first])
      for (int d : g.nodes.ta[k.second]) {
        auto it = g.arcs.find({s, d});
        ASSERT_NE(it, g.arcs.end());
        EXPECT_TRUE(std::includes(it->second.begin(), it->second.end(), perms.begin(), perms.end()));
      }
}

TEST(Graph, AllowOnUndeclaredNodeFails) {
  RuleSet g = parse_config("(type a) (allow .a .ghost (file (read)))");
  EXPECT_THROW(build_graph(g), SemanticError);
}

TEST(Requirements, WebAppLabels) {
  Pipeline p = Pipeline::fixture("webapp.cil");
  std::vector<std::string> labels;
  for (const auto& r : p.reqs) labels.push_back(r.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"F1", "F2", "F1R", "F2R", "S1R", "S2"}));
}

TEST(Requirements, NoneWithoutIslands) {
  Pipeline p("(type a) (allow a a (file (read)))");
  EXPECT_TRUE(p.reqs.empty());
}

TEST(Requirements, UncalledMacroContributesNothing) {
  Pipeline p("(type a) (macro m((type x)) ;IFL; (F) x > a ;IFL;)");
  EXPECT_TRUE(p.reqs.empty());
}

TEST(Requirements, BlockLabelsArePrefixed) {
  Pipeline p("(type a) (block A ;IFL; (F) .a > .a ;IFL;)");
  ASSERT_EQ(p.reqs.size(), 1u);
  EXPECT_EQ(p.reqs[0].label, "A.F");
}

TEST(Requirements, UndeclaredNodeFails) {
  RuleSet g = parse_config("(type a) ;IFL; (F) .a > .ghost ;IFL;");
  Graph gr = build_graph(g);
  EXPECT_THROW(collect_requirements(g, gr), SemanticError);
}

TEST(FlowTable, DefaultsAndLookup) {
  FlowTable t = FlowTable::defaults();
  EXPECT_EQ(t.lookup("file", "read"), FlowDirection::Backward);
  EXPECT_EQ(t.lookup("file", "write"), FlowDirection::Forward);
  EXPECT_EQ(t.lookup("chr_file", "ioctl"), FlowDirection::Both);
  EXPECT_EQ(t.lookup("file", "getattr"), FlowDirection::Backward);
  EXPECT_EQ(t.lookup("file", "append"), FlowDirection::Forward);
  EXPECT_EQ(t.lookup("file", "setattr"), FlowDirection::Forward);
  EXPECT_FALSE(t.lookup("file", "open"));
}

TEST(FlowTable, ParseAndSpecificity) {
  FlowTable t = FlowTable::parse("# comment\nread backward\nsocket.read none  # trailing\n\nopen FORWARD\n");
  EXPECT_EQ(t.lookup("file", "read"), FlowDirection::Backward);
  EXPECT_EQ(t.lookup("socket", "read"), FlowDirection::None);
  EXPECT_EQ(t.lookup("file", "open"), FlowDirection::Forward);
  FlowTable o = FlowTable::defaults().overlay(t);
  EXPECT_EQ(o.lookup("file", "write"), FlowDirection::Forward);
  EXPECT_EQ(o.lookup("file", "open"), FlowDirection::Forward);
}

TEST(FlowTable, FileMatchesDefaults) {
  EXPECT_EQ(FlowTable::parse(read_data("default.flows")).entries(), FlowTable::defaults().entries());
}

TEST(FlowTable, Malformed) {
  EXPECT_THROW(FlowTable::parse("read sideways"), FlowTableError);
  EXPECT_THROW(FlowTable::parse("read"), FlowTableError);
  EXPECT_THROW(FlowTable::parse("read backward extra"), FlowTableError);
}

TEST(Ifd, WebAppFlowArcs) {
  Pipeline p = Pipeline::fixture("webapp.cil");
  EXPECT_EQ(flow_arcs(p.ifd, true), (std::set<Arc>{
                                        {".DB", "read", ".anon"},
                                        {".home", "read", ".http"},
                                        {".http", "write", ".DB"},
                                        {".anon", "read", ".http"},
                                        {".http", "write", ".net"},
                                        {".net", "read", ".http"},
                                    }));
  auto all = flow_arcs(p.ifd, false);
  EXPECT_EQ(all.size(), 7u);
  EXPECT_TRUE(all.count({".other", "read", ".http"}));
}

TEST(Ifd, ReadReversesWritePreserves) {
  Pipeline p("(type anon) (type DB) (type http) (type net)"
             "(allow anon DB (file (read))) (allow http net (file (read write)))");
  EXPECT_EQ(flow_arcs(p.ifd, true), (std::set<Arc>{{".DB", "read", ".anon"},
                                                   {".http", "write", ".net"},
                                                   {".net", "read", ".http"}}));
}

TEST(Ifd, NoneDirectionGivesNoArc) {
  FlowTable t = FlowTable::parse("open none");
  Pipeline p("(type a) (type b) (allow a b (file (open)))", t);
  EXPECT_TRUE(p.ifd.arcs.empty());
}

TEST(Ifd, BothDirections) {
  Pipeline p("(type a) (type b) (allow a b (chr_file (ioctl)))");
  EXPECT_EQ(flow_arcs(p.ifd, true), (std::set<Arc>{{".a", "ioctl", ".b"}, {".b", "ioctl", ".a"}}));
}

TEST(Ifd, ClassSpecificEntryWins) {
  FlowTable t = FlowTable::defaults().overlay(FlowTable::parse("socket.read forward"));
  Pipeline p("(type a) (type b) (allow a b (socket (read))) (allow a b (file (read)))", t);
  EXPECT_EQ(flow_arcs(p.ifd, true), (std::set<Arc>{{".a", "read", ".b"}, {".b", "read", ".a"}}));
}

TEST(Ifd, UnknownOperations) {
  RuleSet g = normalize(parse_config("(type a) (allow a a (file (open)))"));
  Graph gr = build_graph(g);
  Diagnostics d;
  Ifd lenient = build_ifd(gr, FlowTable::defaults(), false, &d);
  EXPECT_TRUE(lenient.arcs.empty());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d[0].message.find("open"), std::string::npos);
  EXPECT_THROW(build_ifd(gr, FlowTable::defaults(), true), FlowTableError);
}

TEST(Ifd, EveryArcIsJustified) {
  Pipeline p = Pipeline::fixture("webapp_mutated.cil");
  FlowTable t = FlowTable::defaults();
  for (const auto& [k, ops] : p.ifd.arcs)
    for (const auto& op : ops) {
      bool ok = false;
      auto fwd = p.graph.arcs.find(k);
      if (fwd != p.graph.arcs.end())
        for (const auto& [cls, o] : fwd->second) {
          auto d = t.lookup(cls, o);
          ok |= o == op && d && (*d == FlowDirection::Forward || *d == FlowDirection::Both);
        }
      auto bwd = p.graph.arcs.find({k.second, k.first});
      if (bwd != p.graph.arcs.end())
        for (const auto& [cls, o] : bwd->second) {
          auto d = t.lookup(cls, o);
          ok |= o == op && d && (*d == FlowDirection::Backward || *d == FlowDirection::Both);
        }
      EXPECT_TRUE(ok) << p.ifd.nodes.names[k.first].str() << " " << op << " " << p.ifd.nodes.names[k.second].str();
    }
}
