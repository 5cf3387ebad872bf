#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lpvstab/lmi.hpp"
#include "lpvstab/sdp.hpp"

namespace lpvstab {

/// Grid of randomized chain configurations crossed with analysis methods.
struct ExperimentSpec {
  std::vector<int> q_list{2, 3, 4, 5};  // masses per cell (n = 2q)
  std::vector<int> l_list{1, 2, 3};     // time-varying springs (r = 2^l)
  int trials = 50;
  double delta = 0.5;  // symmetric rate bound per simplex coordinate, 1/s
  std::vector<Method> methods{Method::Quadratic, Method::PdlfExact,
                              Method::PdlfSimplex};
  std::uint64_t seed = 1;
  SolveOptions solver;

  void validate() const;
};

struct TrialResult {
  int q = 0;
  int l = 0;
  int trial = 0;
  Method method = Method::Quadratic;
  SolveStatus status = SolveStatus::NotCertified;
  double margin = 0.0;
  double wall_time = 0.0;  // assemble + solve span, seconds
  long block_count = 0;
  int iters = 0;
  std::string diagnostics;
  MdofConfig config;
};

struct CellStats {
  int q = 0, l = 0, n = 0, r = 0;
  struct PerMethod {
    Method method = Method::Quadratic;
    int trials = 0;
    int certified = 0;
    double ratio = 0.0;
    double mean_wall_time = 0.0;
    long block_count = 0;
  };
  std::vector<PerMethod> methods;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<TrialResult> trials;
  std::vector<CellStats> cells;
  std::string environment;
};

/// One configuration, one method: builds the polytope and the rate vertices,
/// then times assemble + solve with a monotonic clock. Lower-module errors
/// are recorded in the result, not thrown.
TrialResult run_trial(const MdofConfig& cfg, Method method, double delta,
                      const SolveOptions& solver);

/// Paired design: per (q, l) cell, `trials` configurations are drawn from the
/// master seed and every method runs on the same configurations. Trials run
/// on a worker pool capped by LPVSTAB_THREADS; aggregation order is fixed, so
/// everything except wall times reproduces bit-for-bit from the seed.
ExperimentReport run_experiment(const ExperimentSpec& spec);

struct GrowthRow {
  int r = 0;
  std::int64_t p_exact = 0;   // columns of H, by enumeration
  int p_simplex = 0;          // columns of Hbar (= r)
};

/// Vertex growth of the exact rate polytope vs the simplex, r = 2..r_max.
std::vector<GrowthRow> vertex_growth_table(int r_max);

enum class ReportFormat { Json, Csv, Markdown };

ReportFormat report_format_from_name(const std::string& name);

/// json is lossless (parseable back into an ExperimentReport); csv and
/// markdown render the per-cell summary tables.
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace lpvstab
