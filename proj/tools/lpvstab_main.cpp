// lpvstab: stability certification of polytopic LPV systems via LMI
// feasibility, plus the randomized mass-damper-spring benchmark runner.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "lpvstab/bench.hpp"
#include "lpvstab/json_io.hpp"

namespace {

using namespace lpvstab;

Eigen::VectorXd parse_vector(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  return Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                           static_cast<Eigen::Index>(vals.size()));
}

void write_or_print(const nlohmann::json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json_file(j, out);
}

struct VerticesArgs {
  int r = 0;
  double delta = 0.0;
  std::string delta_min, delta_max, mode, out;
};

int run_vertices(const VerticesArgs& args) {
  DerivativeBounds bounds;
  if (!args.delta_min.empty() || !args.delta_max.empty()) {
    if (args.delta_min.empty() || args.delta_max.empty())
      throw std::invalid_argument("--delta-min and --delta-max must be given together");
    bounds.delta_min = parse_vector(args.delta_min);
    bounds.delta_max = parse_vector(args.delta_max);
    if (bounds.r() != args.r)
      throw std::invalid_argument("bound vectors must have length r");
  } else if (args.delta > 0.0) {
    bounds = DerivativeBounds::symmetric(args.r, args.delta);
  } else {
    throw std::invalid_argument("need either --delta or --delta-min/--delta-max");
  }

  const VertexMatrix vm =
      args.mode == "h" ? enumerate_h_vertices(bounds) : build_hbar(bounds);
  write_or_print(nlohmann::json(vm), args.out);
  return 0;
}

struct AnalyzeArgs {
  std::string model, method, out;
  double delta = 0.5;
  SolveOptions solver;
};

int run_analyze(const AnalyzeArgs& args) {
  PolytopicSystem sys = load_json_file(args.model).get<PolytopicSystem>();
  const Method method = method_from_name(args.method);

  VertexMatrix deriv;
  ConstraintSet cs;
  if (method == Method::Quadratic) {
    cs = assemble_quadratic(sys);
  } else {
    const DerivativeBounds bounds = DerivativeBounds::symmetric(sys.r(), args.delta);
    deriv = method == Method::PdlfExact ? enumerate_h_vertices(bounds)
                                        : build_hbar(bounds);
    cs = assemble_pdlf(sys, deriv);
  }
  const Outcome outcome = solve_feasibility(cs, args.solver);

  nlohmann::json report{{"model", args.model},
                        {"label", sys.label},
                        {"n", sys.n},
                        {"r", sys.r()},
                        {"method", method_name(method)},
                        {"delta", args.delta},
                        {"block_count", cs.blocks.size()},
                        {"solver", args.solver},
                        {"outcome", outcome}};
  if (method != Method::Quadratic) report["rate_vertices"] = deriv;
  write_or_print(report, args.out);

  std::cerr << (outcome.status == SolveStatus::FeasibleCertified
                    ? "feasible-certified"
                    : "not-certified")
            << " (margin " << outcome.margin << ", " << outcome.iters
            << " sweeps, " << outcome.wall_time << " s)\n";
  return 0;
}

struct BenchArgs {
  std::string masses_list = "2,3,4,5";
  std::string tv_list = "1,2,3";
  std::string methods = "quadratic,pdlf-h,pdlf-hbar";
  int trials = 50;
  double delta = 0.5;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  SolveOptions solver;
};

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stoi(item));
  return vals;
}

int run_bench_mdof(const BenchArgs& args) {
  ExperimentSpec spec;
  spec.q_list = parse_int_list(args.masses_list);
  spec.l_list = parse_int_list(args.tv_list);
  spec.trials = args.trials;
  spec.delta = args.delta;
  spec.seed = args.seed;
  spec.solver = args.solver;
  spec.methods.clear();
  std::stringstream ss(args.methods);
  std::string item;
  while (std::getline(ss, item, ',')) spec.methods.push_back(method_from_name(item));

  const ReportFormat format = report_format_from_name(args.format);
  const std::filesystem::path dir(args.out);
  std::filesystem::create_directories(dir);

  const ExperimentReport report = run_experiment(spec);

  emit_report(report, ReportFormat::Json, dir / "report.json");
  if (format == ReportFormat::Csv)
    emit_report(report, format, dir / "report.csv");
  else if (format == ReportFormat::Markdown)
    emit_report(report, format, dir / "report.md");

  for (const auto& cell : report.cells) {
    std::cout << "cell q=" << cell.q << " l=" << cell.l << " (n=" << cell.n
              << ", r=" << cell.r << "):";
    for (const auto& m : cell.methods)
      std::cout << "  " << method_name(m.method) << " ratio=" << m.ratio
                << " mean_t=" << m.mean_wall_time << "s";
    std::cout << "\n";
  }
  return 0;
}

int run_growth(int r_max, const std::string& out) {
  const auto rows = vertex_growth_table(r_max);
  nlohmann::json j = nlohmann::json::array();
  std::cout << "| r | p (exact H) | p (simplex Hbar) |\n|---|---|---|\n";
  for (const auto& row : rows) {
    std::cout << "| " << row.r << " | " << row.p_exact << " | " << row.p_simplex
              << " |\n";
    j.push_back({{"r", row.r}, {"p_exact", row.p_exact}, {"p_simplex", row.p_simplex}});
  }
  if (!out.empty()) save_json_file(j, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust stability certification for polytopic LPV systems"};
  app.require_subcommand(1);

  VerticesArgs vertices;
  auto* cmd_vertices = app.add_subcommand(
      "vertices", "Enumerate rate-polytope vertices (H) or the circumscribing simplex (Hbar)");
  cmd_vertices->add_option("--r", vertices.r, "Number of simplex coordinates")->required();
  cmd_vertices->add_option("--delta", vertices.delta, "Symmetric rate bound");
  cmd_vertices->add_option("--delta-min", vertices.delta_min, "Comma-separated lower bounds");
  cmd_vertices->add_option("--delta-max", vertices.delta_max, "Comma-separated upper bounds");
  cmd_vertices->add_option("--mode", vertices.mode, "h | hbar")
      ->required()
      ->check(CLI::IsMember({"h", "hbar"}));
  cmd_vertices->add_option("--out", vertices.out, "Output JSON file (default stdout)");

  AnalyzeArgs analyze;
  auto* cmd_analyze =
      app.add_subcommand("analyze", "Run one stability analysis on a model file");
  cmd_analyze->add_option("--model", analyze.model, "PolytopicSystem JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_analyze->add_option("--method", analyze.method, "quadratic | pdlf-h | pdlf-hbar")
      ->required()
      ->check(CLI::IsMember({"quadratic", "pdlf-h", "pdlf-hbar"}));
  cmd_analyze->add_option("--delta", analyze.delta, "Symmetric rate bound (default 0.5)");
  cmd_analyze->add_option("--epsilon", analyze.solver.epsilon, "Certification margin");
  cmd_analyze->add_option("--max-iters", analyze.solver.max_iters, "Solver sweep budget");
  cmd_analyze->add_option("--time-budget", analyze.solver.time_budget, "Solver wall cap (s)");
  cmd_analyze->add_option("--seed", analyze.solver.seed, "Solver seed (recorded)");
  cmd_analyze->add_option("--out", analyze.out, "Report JSON path")->required();

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Benchmark experiments");
  auto* cmd_mdof = cmd_bench->add_subcommand(
      "mdof", "Randomized mass-damper-spring study across methods");
  cmd_mdof->add_option("--masses-list", bench.masses_list, "Mass counts q (csv)");
  cmd_mdof->add_option("--tv-list", bench.tv_list, "Time-varying spring counts l (csv)");
  cmd_mdof->add_option("--trials", bench.trials, "Trials per cell");
  cmd_mdof->add_option("--delta", bench.delta, "Symmetric rate bound");
  cmd_mdof->add_option("--seed", bench.seed, "Master seed");
  cmd_mdof->add_option("--methods", bench.methods, "Methods to run (csv)");
  cmd_mdof->add_option("--format", bench.format, "json | csv | markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));
  cmd_mdof->add_option("--out", bench.out, "Output directory")->required();
  cmd_mdof->add_option("--epsilon", bench.solver.epsilon, "Certification margin");
  cmd_mdof->add_option("--max-iters", bench.solver.max_iters, "Solver sweep budget");
  cmd_mdof->add_option("--time-budget", bench.solver.time_budget, "Solver wall cap (s)");

  int r_max = 11;
  std::string growth_out;
  auto* cmd_growth = cmd_bench->add_subcommand(
      "growth", "Vertex growth table: exact H vs simplex Hbar");
  cmd_growth->add_option("--r-max", r_max, "Largest r (<= 14)");
  cmd_growth->add_option("--out", growth_out, "Optional JSON output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (cmd_vertices->parsed()) return run_vertices(vertices);
    if (cmd_analyze->parsed()) return run_analyze(analyze);
    if (cmd_bench->parsed()) {
      if (cmd_mdof->parsed()) return run_bench_mdof(bench);
      if (cmd_growth->parsed()) return run_growth(r_max, growth_out);
      std::cerr << "bench requires a subcommand (mdof | growth)\n";
      return 2;
    }
  } catch (const EigenFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const SingularMass& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
