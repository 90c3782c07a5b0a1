#include "gapinfo/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <exception>
#include <optional>
#include <ostream>

#include "gapinfo/counterexample.hpp"
#include "gapinfo/io.hpp"
#include "gapinfo/search.hpp"

namespace gapinfo::cli {

namespace {

constexpr const char* kViolates = "VIOLATES implication (P_B > P_E => I(A,B) > I(A,E))";
constexpr const char* kHolds = "implication (P_B > P_E => I(A,B) > I(A,E)) not violated";

void print_report(std::ostream& out, const InfoReport& r, const char* indent = "") {
  fmt::print(out, "{}p_b={:.6f}\n", indent, r.p_b);
  fmt::print(out, "{}p_e={:.6f}\n", indent, r.p_e);
  fmt::print(out, "{}i_ab={:.6f}\n", indent, r.i_ab);
  fmt::print(out, "{}i_ae={:.6f}\n", indent, r.i_ae);
  fmt::print(out, "{}h_a={:.6f}\n", indent, r.h_a);
  fmt::print(out, "{}fano_slack_b={:.6f}\n", indent, r.fano_slack_b);
  fmt::print(out, "{}fano_slack_e={:.6f}\n", indent, r.fano_slack_e);
  fmt::print(out, "{}premise_holds={}\n", indent, r.premise_holds);
  fmt::print(out, "{}implication_violated={}\n", indent, r.implication_violated);
}

void print_verdict(std::ostream& out, const InfoReport& r) {
  out << (r.implication_violated ? kViolates : kHolds) << '\n';
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

struct VerifyArgs {
  double epsilon = 0.01;
  double tol = 1e-9;
  std::string json_path;
};

struct SweepArgs {
  double start = 0.0;
  double end = 0.0;
  int steps = 0;
  std::string csv_path;
  std::string svg_path;
};

struct SearchArgs {
  SearchConfig cfg;
  bool no_warm_start = false;
  unsigned threads = 1;
  std::string json_path;
};

struct AnalyzeArgs {
  std::string input;
  std::string json_path;
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
  const VerificationReport v = verify_counterexample(a.epsilon, a.tol);
  fmt::print(out, "epsilon={:.6f}\n", v.epsilon);
  fmt::print(out, "epsilon_prime={:.6f}\n", CounterexampleParams::from_epsilon(a.epsilon).epsilon_prime);
  out << "analyzed:\n";
  print_report(out, v.analyzed, "  ");
  out << "closed_form:\n";
  print_report(out, v.closed_form, "  ");
  fmt::print(out, "max_deviation={:.6e}\n", v.max_deviation);
  print_verdict(out, v.analyzed);
  out << (v.passed ? "PASS" : "FAIL") << '\n';
  if (!a.json_path.empty()) {
    write_json(a.json_path, {{"epsilon", v.epsilon},
                             {"tol", v.tol},
                             {"analyzed", report_to_json(v.analyzed)},
                             {"closed_form", report_to_json(v.closed_form)},
                             {"max_deviation", v.max_deviation},
                             {"passed", v.passed},
                             {"distribution", distribution_to_json(build_counterexample(v.epsilon))}});
  }
  return v.passed ? kOk : kVerificationFailed;
}

int run_sweep(const SweepArgs& a, std::ostream& out) {
  const auto rows = sweep(a.start, a.end, a.steps);
  emit_sweep_csv(rows, a.csv_path);
  if (!a.svg_path.empty()) render_sweep_svg(rows, a.svg_path);
  out << "epsilon   p_b       p_e       i_ab      i_ae      gap\n";
  for (const auto& r : rows) {
    fmt::print(out, "{:.6f}  {:.6f}  {:.6f}  {:.6f}  {:.6f}  {:+.6f}\n", r.epsilon, r.p_b, r.p_e,
               r.i_ab, r.i_ae, r.gap);
  }
  return kOk;
}

int run_search_cmd(SearchArgs a, std::ostream& out, std::ostream& err) {
  a.cfg.include_family_warm_start = !a.no_warm_start;
  std::optional<SearchResult> found;
  try {
    found = run_search(a.cfg, a.threads);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoFeasiblePoint) throw;
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  }
  const SearchResult& result = *found;
  fmt::print(out, "shape=(bob={},alice={},eve={}) delta={:.6f} lambda={:.6f}\n",
             a.cfg.shape.bob, a.cfg.shape.alice, a.cfg.shape.eve, a.cfg.delta,
             a.cfg.penalty_weight);
  print_report(out, result.report);
  fmt::print(out, "gap={:.6f}\n", result.report.i_ae - result.report.i_ab);
  fmt::print(out, "objective={:.6f}\n", result.objective);
  fmt::print(out, "feasible={}\n", result.feasible);
  fmt::print(out, "restart_index={}\n", result.restart_index);
  fmt::print(out, "iterations_used={}\n", result.iterations_used);
  print_verdict(out, result.report);
  if (!a.json_path.empty()) write_json(a.json_path, search_result_to_json(result, a.cfg));
  return kOk;
}

int run_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto dist = load_distribution(a.input);
  const InfoReport r = analyze_tripartite(dist);
  fmt::print(out, "shape=(bob={},alice={},eve={})\n", dist.shape().bob, dist.shape().alice,
             dist.shape().eve);
  print_report(out, r);
  print_verdict(out, r);
  if (!a.json_path.empty()) {
    write_json(a.json_path, {{"distribution", distribution_to_json(dist)},
                             {"report", report_to_json(r)}});
  }
  return kOk;
}

int run_boundary(const std::string& json_path, std::ostream& out) {
  const double eps = violation_boundary();
  const double residual = closed_form_gap(eps);
  fmt::print(out, "epsilon_star={:.6f}\n", eps);
  fmt::print(out, "residual={:.3e}\n", residual);
  if (!json_path.empty()) {
    write_json(json_path, {{"epsilon_star", eps}, {"residual", residual}});
  }
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("gapinfo");
  return dispatch(int(argv.size()), argv.data(), out, err);
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Guessing probability versus mutual information for tripartite distributions",
               "gapinfo"};
  app.require_subcommand(1);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check the counterexample family against its closed forms");
  verify->add_option("--epsilon", verify_args.epsilon, "Family parameter in (0, 0.25]")->required();
  verify->add_option("--tol", verify_args.tol, "Comparison tolerance")->capture_default_str();
  verify->add_option("--json", verify_args.json_path, "Write full-precision results here");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate the family over an epsilon range");
  sweep_cmd->add_option("--start", sweep_args.start)->required();
  sweep_cmd->add_option("--end", sweep_args.end)->required();
  sweep_cmd->add_option("--steps", sweep_args.steps)->required();
  sweep_cmd->add_option("--csv", sweep_args.csv_path, "CSV output path")->required();
  sweep_cmd->add_option("--svg", sweep_args.svg_path, "SVG chart output path");

  SearchArgs search_args;
  SearchConfig& cfg = search_args.cfg;
  auto* search = app.add_subcommand("search", "Maximize I(A;E) - I(A;B) subject to P_B - P_E >= delta");
  search->add_option("--bob", cfg.shape.bob)->capture_default_str();
  search->add_option("--alice", cfg.shape.alice)->capture_default_str();
  search->add_option("--eve", cfg.shape.eve)->capture_default_str();
  search->add_option("--delta", cfg.delta)->capture_default_str();
  search->add_option("--restarts", cfg.restarts)->capture_default_str();
  search->add_option("--seed", cfg.seed)->capture_default_str();
  search->add_option("--lambda", cfg.penalty_weight, "Penalty weight")->capture_default_str();
  search->add_option("--max-iters", cfg.max_iters)->capture_default_str();
  search->add_option("--init-step", cfg.init_step)->capture_default_str();
  search->add_option("--converge-tol", cfg.converge_tol)->capture_default_str();
  search->add_flag("--no-warm-start", search_args.no_warm_start,
                   "Skip the epsilon = 0.01 counterexample start on shape (2,2,4)");
  search->add_option("--threads", search_args.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();
  search->add_option("--json", search_args.json_path, "Write the full result here");

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Report on a distribution file");
  analyze->add_option("--input", analyze_args.input)->required();
  analyze->add_option("--json", analyze_args.json_path);

  std::string boundary_json;
  auto* boundary = app.add_subcommand("boundary", "Epsilon where the family stops violating");
  boundary->add_option("--json", boundary_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (verify->parsed()) return run_verify(verify_args, out);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args, out);
    if (search->parsed()) return run_search_cmd(search_args, out, err);
    if (analyze->parsed()) return run_analyze(analyze_args, out);
    if (boundary->parsed()) return run_boundary(boundary_json, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (...) {
    err << "error: unknown failure\n";
    return kUsage;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace gapinfo::cli
