#include "ifcil/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ifcil/graph.hpp"
#include "ifcil/normalize.hpp"
#include "ifcil/nusmv.hpp"
#include "ifcil/verifier.hpp"
#include "json.hpp"

namespace ifcil {

namespace {

struct IoError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

std::string witness_line(const std::vector<WitnessStep>& w) {
  std::string s = w.front().from.str();
  size_t shown = std::min(w.size(), kWitnessDisplayCap);
  for (size_t i = 0; i < shown; ++i) s += " -[" + w[i].op + "]-> " + w[i].to.str();
  if (shown < w.size()) s += " ... (" + std::to_string(w.size() - shown) + " more steps)";
  return s;
}

nlohmann::json report_json(const RunConfig& cfg, const std::vector<LabeledResult>& results,
                           const Diagnostics& diags) {
  nlohmann::json j;
  j["input"] = cfg.input;
  j["checker"] = cfg.mode == Mode::Oracle ? "oracle" : "automaton";
  j["requirements"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json rec;
    rec["label"] = r.label;
    rec["verdict"] = to_string(r.result.verdict);
    rec["witness"] = nlohmann::json::array();
    for (const auto& s : r.result.witness) rec["witness"].push_back({{"from", s.from.str()}, {"op", s.op}, {"to", s.to.str()}});
    if (!r.result.note.empty()) rec["note"] = r.result.note;
    j["requirements"].push_back(std::move(rec));
  }
  j["warnings"] = nlohmann::json::array();
  for (const auto& d : diags) j["warnings"].push_back(d.message);
  return j;
}

std::string dump_graph(const Graph& g, const Ifd& ifd) {
  std::string out = "# permissions\n";
  for (const auto& [arc, perms] : g.arcs) {
    std::string ps;
    for (const auto& [c, p] : perms) ps += (ps.empty() ? "" : ",") + c + "." + p;
    out += g.nodes.names[arc.first].str() + " " + ps + " " + g.nodes.names[arc.second].str() + "\n";
  }
  out += "# flows\n";
  for (const auto& [arc, ops] : ifd.arcs) {
    std::string os;
    for (const auto& o : ops) os += (os.empty() ? "" : ",") + o;
    out += ifd.nodes.names[arc.first].str() + " " + os + " " + ifd.nodes.names[arc.second].str() + "\n";
  }
  return out;
}

std::string run_external(const std::string& binary, const std::string& model_path) {
  std::string cmd = "\"" + binary + "\" \"" + model_path + "\" 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw IoError("cannot run " + binary);
  std::string text;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, p)) text.append(buf, n);
  pclose(p);
  return text;
}

int exit_for(const std::vector<LabeledResult>& results) {
  bool unknown = false;
  for (const auto& r : results) {
    if (r.result.verdict == Verdict::Violated) return exit_code::kViolated;
    if (r.result.verdict == Verdict::Unknown) unknown = true;
  }
  return unknown ? exit_code::kUnknown : exit_code::kSatisfied;
}

int run_checked(const RunConfig& cfg, std::ostream& out, std::ostream& err, Diagnostics& diags) {
  std::string text = read_file(cfg.input);
  RuleSet parsed;
  try {
    parsed = parse_config(text, &diags);
  } catch (const ParseError& e) {
    err << cfg.input << ":" << e.what() << "\n";
    return exit_code::kParse;
  }
  RuleSet normal;
  try {
    normal = normalize(parsed, &diags);
  } catch (const NormalizeError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kNormalize;
  }
  if (cfg.mode == Mode::DumpNormalized) {
    out << print_config(normal);
    return exit_code::kSatisfied;
  }

  Graph g;
  std::vector<LabeledRequirement> reqs;
  try {
    g = build_graph(normal, &diags);
    reqs = collect_requirements(normal, g);
  } catch (const SemanticError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kSemantics;
  }

  Ifd ifd;
  try {
    FlowTable table;
    if (!cfg.flows) {
      if (cfg.strict_flows) throw FlowTableError("--strict-flows needs --flows");
      warn(&diags, "no flow table given; using the built-in defaults");
      table = FlowTable::defaults();
    } else if (cfg.strict_flows) {
      table = FlowTable::parse(read_file(*cfg.flows));
    } else {
      table = FlowTable::defaults().overlay(FlowTable::parse(read_file(*cfg.flows)));
    }
    ifd = build_ifd(g, table, cfg.strict_flows, &diags);
  } catch (const FlowTableError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kFlowTable;
  }

  if (cfg.mode == Mode::DumpGraph) {
    out << dump_graph(g, ifd);
    return exit_code::kSatisfied;
  }

  Kts kts = build_kts(ifd);

  if (cfg.mode == Mode::EmitNusmv) {
    try {
      SinkKts ks = add_sink(kts, g.nodes);
      write_file(cfg.emit_path, emit_nusmv(ks, attribute_definitions(normal, g), reqs, {cfg.nusmv_exact}));
    } catch (const EmitError& e) {
      err << "error: " << e.what() << "\n";
      return exit_code::kEmit;
    }
    return exit_code::kSatisfied;
  }

  std::vector<LabeledResult> results;
  if (cfg.mode == Mode::Oracle) {
    size_t types = kts.states.size();
    if (types > kOracleTypeLimit && !cfg.force) {
      err << "error: the oracle enumerates paths and is limited to " << kOracleTypeLimit << " types (this graph has "
          << types << "); pass --force to run it anyway\n";
      return exit_code::kUsage;
    }
    for (const auto& r : reqs)
      results.push_back({r.label, {oracle_holds(ifd, r.requirement) ? Verdict::Satisfied : Verdict::Violated, {}, {}}});
  } else {
    results = check_all(kts, reqs);
  }

  for (const auto& r : results) {
    out << r.label << ": " << to_string(r.result.verdict) << "\n";
    if (!r.result.witness.empty()) out << "  " << witness_line(r.result.witness) << "\n";
    if (!r.result.note.empty()) out << "  (" << r.result.note << ")\n";
  }

  int code = exit_for(results);

  if (cfg.cross_check) {
    try {
      SinkKts ks = add_sink(kts, g.nodes);
      auto model = std::filesystem::temp_directory_path() / "ifcil-cross-check.smv";
      write_file(model.string(), emit_nusmv(ks, attribute_definitions(normal, g), reqs, {true}));
      auto external = parse_response(run_external(*cfg.cross_check, model.string()), reqs);
      for (size_t i = 0; i < reqs.size(); ++i) {
        if (external[i] != results[i].result.verdict && results[i].result.verdict != Verdict::Unknown) {
          err << "cross-check: " << reqs[i].label << " external " << to_string(external[i]) << " vs internal "
              << to_string(results[i].result.verdict) << "\n";
          code = exit_code::kEmit;
        }
      }
    } catch (const EmitError& e) {
      err << "error: cross-check: " << e.what() << "\n";
      return exit_code::kEmit;
    }
  }

  if (cfg.report_path) write_file(*cfg.report_path, report_json(cfg, results, diags).dump(2) + "\n");
  return code;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Diagnostics diags;
  int code;
  try {
    code = run_checked(cfg, out, err, diags);
  } catch (const IoError& e) {
    code = exit_code::kUsage;
    err << "error: " << e.what() << "\n";
  }
  for (const auto& d : diags) err << "warning: " << d.message << "\n";
  return code;
}

}  // namespace ifcil
