#include <iostream>

#include "CLI11.hpp"
#include "ifcil/cli.hpp"

int main(int argc, char** argv) {
  ifcil::RunConfig cfg;
  CLI::App app{"Check information flow requirements of an annotated CIL configuration"};
  std::string flows, emit, report, cross;
  bool dump_normalized = false, dump_graph = false, oracle = false;

  app.add_option("input", cfg.input, "Configuration file")->required();
  app.add_option("--flows", flows, "Flow table: lines of `<op|class.op> <forward|backward|both|none>`");
  app.add_flag("--strict-flows", cfg.strict_flows, "Fail on operations missing from the flow table");
  auto* emit_opt = app.add_option("--emit-nusmv", emit, "Write a NuSMV model with one LTLSPEC per requirement");
  auto* norm_opt = app.add_flag("--dump-normalized", dump_normalized, "Print the normal form and exit");
  auto* graph_opt = app.add_flag("--dump-graph", dump_graph, "Print permission and flow arcs and exit");
  auto* oracle_opt = app.add_flag("--oracle", oracle, "Decide requirements by path enumeration");
  app.add_flag("--force", cfg.force, "Run the oracle on graphs above its size limit");
  app.add_flag("--nusmv-exact-ends", cfg.nusmv_exact, "Pin path ends to the sink state in emitted specs");
  app.add_option("--report", report, "Write a JSON report");
  app.add_option("--cross-check-nusmv", cross, "Compare verdicts with an external NuSMV binary");
  emit_opt->excludes(norm_opt, graph_opt, oracle_opt);
  norm_opt->excludes(graph_opt, oracle_opt);
  graph_opt->excludes(oracle_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : ifcil::exit_code::kUsage;
  }

  if (!flows.empty()) cfg.flows = flows;
  if (!report.empty()) cfg.report_path = report;
  if (!cross.empty()) cfg.cross_check = cross;
  if (!emit.empty()) {
    cfg.mode = ifcil::Mode::EmitNusmv;
    cfg.emit_path = emit;
  } else if (dump_normalized) {
    cfg.mode = ifcil::Mode::DumpNormalized;
  } else if (dump_graph) {
    cfg.mode = ifcil::Mode::DumpGraph;
  } else if (oracle) {
    cfg.mode = ifcil::Mode::Oracle;
  }
  return ifcil::run(cfg, std::cout, std::cerr);
}
