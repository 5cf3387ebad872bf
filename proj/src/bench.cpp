#include "lpvstab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "lpvstab/json_io.hpp"
#include "lpvstab/rng.hpp"

namespace lpvstab {

namespace {

using Clock = std::chrono::steady_clock;

unsigned pool_size() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("LPVSTAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

std::string environment_string() {
  std::ostringstream os;
  os << "lpvstab; eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION
     << "." << EIGEN_MINOR_VERSION << "; threads " << pool_size();
  return os.str();
}

}  // namespace

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
  if (q_list.empty() || l_list.empty() || methods.empty())
    throw std::invalid_argument("ExperimentSpec: empty grid");
  if (delta <= 0.0) throw std::invalid_argument("ExperimentSpec: delta must be positive");
  for (int q : q_list)
    for (int l : l_list)
      if (q < 1 || l < 1 || l > q + 1)
        throw std::invalid_argument("ExperimentSpec: cell (q=" + std::to_string(q) +
                                    ", l=" + std::to_string(l) + ") violates l <= q+1");
  solver.validate();
}

TrialResult run_trial(const MdofConfig& cfg, Method method, double delta,
                      const SolveOptions& solver) {
  TrialResult res;
  res.q = cfg.q;
  res.l = cfg.l();
  res.method = method;
  res.config = cfg;
  try {
    const PolytopicSystem sys = build_mdof_polytope(cfg);
    VertexMatrix deriv;
    if (method != Method::Quadratic) {
      const DerivativeBounds bounds = DerivativeBounds::symmetric(sys.r(), delta);
      deriv = method == Method::PdlfExact ? enumerate_h_vertices(bounds)
                                          : build_hbar(bounds);
    }

    const auto t0 = Clock::now();
    const ConstraintSet cs = method == Method::Quadratic
                                 ? assemble_quadratic(sys)
                                 : assemble_pdlf(sys, deriv);
    const Outcome outcome = solve_feasibility(cs, solver);
    res.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();

    res.status = outcome.status;
    res.margin = outcome.margin;
    res.iters = outcome.iters;
    res.block_count = static_cast<long>(cs.blocks.size());
    res.diagnostics = outcome.diagnostics;
  } catch (const std::exception& e) {
    res.status = SolveStatus::NotCertified;
    res.diagnostics = std::string("error: ") + e.what();
  }
  return res;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();

  struct Task {
    MdofConfig cfg;
    Method method;
    int trial;
  };
  std::vector<Task> tasks;
  for (int q : spec.q_list) {
    for (int l : spec.l_list) {
      for (int t = 0; t < spec.trials; ++t) {
        const MdofConfig cfg = sample_configuration(
            q, l, derive_seed(spec.seed, static_cast<std::uint64_t>(q),
                              static_cast<std::uint64_t>(l),
                              static_cast<std::uint64_t>(t)));
        for (Method m : spec.methods) tasks.push_back({cfg, m, t});
      }
    }
  }

  std::vector<TrialResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size();
         i = next.fetch_add(1)) {
      SolveOptions opts = spec.solver;
      opts.seed = tasks[i].cfg.seed;
      results[i] = run_trial(tasks[i].cfg, tasks[i].method, spec.delta, opts);
      results[i].trial = tasks[i].trial;
    }
  };
  const unsigned threads = std::min<std::size_t>(pool_size(), tasks.size());
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  ExperimentReport report;
  report.spec = spec;
  report.trials = std::move(results);
  report.environment = environment_string();

  std::size_t cursor = 0;
  for (int q : spec.q_list) {
    for (int l : spec.l_list) {
      CellStats cell;
      cell.q = q;
      cell.l = l;
      cell.n = 2 * q;
      cell.r = 1 << l;
      std::vector<CellStats::PerMethod> stats(spec.methods.size());
      for (std::size_t m = 0; m < spec.methods.size(); ++m) {
        stats[m].method = spec.methods[m];
        stats[m].trials = spec.trials;
      }
      for (int t = 0; t < spec.trials; ++t) {
        for (std::size_t m = 0; m < spec.methods.size(); ++m, ++cursor) {
          const TrialResult& tr = report.trials[cursor];
          if (tr.status == SolveStatus::FeasibleCertified) ++stats[m].certified;
          stats[m].mean_wall_time += tr.wall_time;
          if (stats[m].block_count == 0) stats[m].block_count = tr.block_count;
        }
      }
      for (auto& s : stats) {
        s.ratio = static_cast<double>(s.certified) / s.trials;
        s.mean_wall_time /= s.trials;
      }
      cell.methods = std::move(stats);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

std::vector<GrowthRow> vertex_growth_table(int r_max) {
  if (r_max > kMaxRateDim)
    throw DimensionGuard("vertex_growth_table: r_max exceeds the enumeration guard");
  std::vector<GrowthRow> rows;
  for (int r = 2; r <= r_max; ++r) {
    GrowthRow row;
    row.r = r;
    row.p_exact = enumerate_h_vertices(DerivativeBounds::symmetric(r, 1.0)).p();
    row.p_simplex = r;
    rows.push_back(row);
  }
  return rows;
}

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "markdown") return ReportFormat::Markdown;
  throw std::invalid_argument("unknown report format: " + name);
}

namespace {

void emit_csv(const ExperimentReport& report, std::ostream& os) {
  os << "q,l,n,r,method,trials,certified,ratio,mean_wall_time_s,block_count\n";
  for (const auto& cell : report.cells)
    for (const auto& m : cell.methods)
      os << cell.q << ',' << cell.l << ',' << cell.n << ',' << cell.r << ','
         << method_name(m.method) << ',' << m.trials << ',' << m.certified
         << ',' << m.ratio << ',' << m.mean_wall_time << ',' << m.block_count
         << '\n';
}

// Paper-style layout: one table per method and metric, n across, r down.
void emit_markdown(const ExperimentReport& report, std::ostream& os) {
  std::vector<int> ns, rs;
  for (const auto& cell : report.cells) {
    if (std::find(ns.begin(), ns.end(), cell.n) == ns.end()) ns.push_back(cell.n);
    if (std::find(rs.begin(), rs.end(), cell.r) == rs.end()) rs.push_back(cell.r);
  }
  std::sort(ns.begin(), ns.end());
  std::sort(rs.begin(), rs.end());

  auto lookup = [&](Method method, int n, int r) -> const CellStats::PerMethod* {
    for (const auto& cell : report.cells) {
      if (cell.n != n || cell.r != r) continue;
      for (const auto& m : cell.methods)
        if (m.method == method) return &m;
    }
    return nullptr;
  };

  os << "# Experiment report\n\n"
     << "delta = " << report.spec.delta << ", trials per cell = "
     << report.spec.trials << ", master seed = " << report.spec.seed << "\n";
  for (Method method : report.spec.methods) {
    for (const bool timing : {false, true}) {
      os << "\n## " << (timing ? "Average computation time (seconds): "
                               : "Certified-feasibility ratio: ")
         << method_name(method) << "\n\n| r \\ n |";
      for (int n : ns) os << ' ' << n << " |";
      os << "\n|---|";
      for (std::size_t i = 0; i < ns.size(); ++i) os << "---|";
      os << '\n';
      for (int r : rs) {
        os << "| " << r << " |";
        for (int n : ns) {
          if (const auto* m = lookup(method, n, r))
            os << ' ' << (timing ? m->mean_wall_time : m->ratio) << " |";
          else
            os << " - |";
        }
        os << '\n';
      }
    }
  }
}

}  // namespace

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  if (format == ReportFormat::Json) {
    save_json_file(nlohmann::json(report), path);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path.string() + " for writing");
  if (format == ReportFormat::Csv)
    emit_csv(report, out);
  else
    emit_markdown(report, out);
}

}  // namespace lpvstab
