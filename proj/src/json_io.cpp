#include "lpvstab/json_io.hpp"

#include <fstream>

namespace lpvstab {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return {};
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols)
      throw std::invalid_argument("matrix_from_json: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto vals = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// Square n x n matrix flattened row-major, the on-disk model layout.
json flat_rowmajor(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  return json(flat);
}

Eigen::MatrixXd unflat_rowmajor(const json& j, int n) {
  const auto flat = j.get<std::vector<double>>();
  if (static_cast<int>(flat.size()) != n * n)
    throw std::invalid_argument("model vertex has wrong element count");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) m(i, c) = flat[static_cast<std::size_t>(i) * n + c];
  return m;
}

}  // namespace

void to_json(json& j, const VertexMatrix& v) {
  j = json{{"r", v.r()},
           {"p", v.p()},
           {"kind", v.kind == VertexKind::ExactPolytope ? "exact-polytope"
                                                        : "circumscribing-simplex"},
           {"columns", json::array()}};
  for (int c = 0; c < v.p(); ++c)
    j["columns"].push_back(vector_to_json(v.columns.col(c)));
}

void from_json(const json& j, VertexMatrix& v) {
  const int r = j.at("r").get<int>();
  const auto& cols = j.at("columns");
  v.kind = j.at("kind").get<std::string>() == "exact-polytope"
               ? VertexKind::ExactPolytope
               : VertexKind::CircumscribingSimplex;
  v.columns.resize(r, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    v.columns.col(static_cast<Eigen::Index>(c)) = vector_from_json(cols.at(c));
}

void to_json(json& j, const DerivativeBounds& b) {
  j = json{{"delta_min", vector_to_json(b.delta_min)},
           {"delta_max", vector_to_json(b.delta_max)}};
}

void from_json(const json& j, DerivativeBounds& b) {
  b.delta_min = vector_from_json(j.at("delta_min"));
  b.delta_max = vector_from_json(j.at("delta_max"));
}

void to_json(json& j, const PolytopicSystem& s) {
  j = json{{"n", s.n}, {"r", s.r()}, {"vertices", json::array()}, {"label", s.label}};
  for (const auto& a : s.vertices) j["vertices"].push_back(flat_rowmajor(a));
}

void from_json(const json& j, PolytopicSystem& s) {
  s.n = j.at("n").get<int>();
  s.label = j.value("label", "");
  const auto& verts = j.at("vertices");
  s.vertices.clear();
  s.vertices.reserve(verts.size());
  for (const auto& v : verts) s.vertices.push_back(unflat_rowmajor(v, s.n));
  if (j.contains("r") && j.at("r").get<int>() != s.r())
    throw std::invalid_argument("model r field disagrees with vertex count");
  s.validate();
}

void to_json(json& j, const MdofConfig& c) {
  json fixed = json::array();
  for (const auto& [idx, val] : c.springs_fixed)
    fixed.push_back(json{{"index", idx}, {"value", val}});
  json ranges = json::array();
  for (const auto& [idx, range] : c.tv_ranges)
    ranges.push_back(json{{"index", idx}, {"min", range[0]}, {"max", range[1]}});
  j = json{{"q", c.q},
           {"masses", vector_to_json(c.masses)},
           {"dampers", vector_to_json(c.dampers)},
           {"springs_fixed", std::move(fixed)},
           {"tv_indices", c.tv_indices},
           {"tv_ranges", std::move(ranges)},
           {"seed", c.seed}};
}

void from_json(const json& j, MdofConfig& c) {
  c.q = j.at("q").get<int>();
  c.masses = vector_from_json(j.at("masses"));
  c.dampers = vector_from_json(j.at("dampers"));
  c.springs_fixed.clear();
  for (const auto& e : j.at("springs_fixed"))
    c.springs_fixed[e.at("index").get<int>()] = e.at("value").get<double>();
  c.tv_indices = j.at("tv_indices").get<std::vector<int>>();
  c.tv_ranges.clear();
  for (const auto& e : j.at("tv_ranges"))
    c.tv_ranges[e.at("index").get<int>()] = {e.at("min").get<double>(),
                                             e.at("max").get<double>()};
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
}

void to_json(json& j, const SolveOptions& o) {
  j = json{{"epsilon", o.epsilon},
           {"max_iters", o.max_iters},
           {"time_budget", o.time_budget},
           {"seed", o.seed},
           {"tol_converge", o.tol_converge}};
}

void from_json(const json& j, SolveOptions& o) {
  o.epsilon = j.at("epsilon").get<double>();
  o.max_iters = j.at("max_iters").get<int>();
  o.time_budget = j.at("time_budget").get<double>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.tol_converge = j.at("tol_converge").get<double>();
}

void to_json(json& j, const Outcome& o) {
  j = json{{"status", o.status == SolveStatus::FeasibleCertified
                          ? "feasible-certified"
                          : "not-certified"},
           {"margin", o.margin},
           {"iters", o.iters},
           {"wall_time", o.wall_time},
           {"diagnostics", o.diagnostics},
           {"assignment", json::array()}};
  for (const auto& p : o.assignment) j["assignment"].push_back(matrix_to_json(p));
}

void to_json(json& j, const MarginReport& r) {
  j = json{{"min_margin", r.min_margin}, {"pass", r.pass}, {"blocks", json::array()}};
  for (const auto& b : r.blocks)
    j["blocks"].push_back(json{{"tag", b.tag},
                               {"lambda_min", b.lambda_min},
                               {"scale", b.scale},
                               {"margin", b.margin}});
}

void to_json(json& j, const ConstraintSet& cs) {
  j = json{{"n", cs.n},
           {"var_count", cs.var_count},
           {"method", method_name(cs.method)},
           {"blocks", json::array()}};
  for (const auto& blk : cs.blocks) {
    json terms = json::array();
    for (const auto& t : blk.terms)
      terms.push_back(json{{"var", t.var},
                           {"left", matrix_to_json(t.left)},
                           {"right", matrix_to_json(t.right)},
                           {"weight", t.weight}});
    j["blocks"].push_back(json{{"tag", blk.tag},
                               {"constant", matrix_to_json(blk.constant)},
                               {"terms", std::move(terms)}});
  }
}

void to_json(json& j, const ExperimentSpec& s) {
  std::vector<std::string> methods;
  for (auto m : s.methods) methods.push_back(method_name(m));
  j = json{{"q_list", s.q_list},     {"l_list", s.l_list},
           {"trials", s.trials},     {"delta", s.delta},
           {"methods", methods},     {"seed", s.seed},
           {"solver", s.solver}};
}

void from_json(const json& j, ExperimentSpec& s) {
  s.q_list = j.at("q_list").get<std::vector<int>>();
  s.l_list = j.at("l_list").get<std::vector<int>>();
  s.trials = j.at("trials").get<int>();
  s.delta = j.at("delta").get<double>();
  s.methods.clear();
  for (const auto& name : j.at("methods"))
    s.methods.push_back(method_from_name(name.get<std::string>()));
  s.seed = j.at("seed").get<std::uint64_t>();
  s.solver = j.at("solver").get<SolveOptions>();
}

void to_json(json& j, const TrialResult& t) {
  j = json{{"q", t.q},
           {"l", t.l},
           {"trial", t.trial},
           {"method", method_name(t.method)},
           {"status", t.status == SolveStatus::FeasibleCertified
                          ? "feasible-certified"
                          : "not-certified"},
           {"margin", t.margin},
           {"wall_time", t.wall_time},
           {"block_count", t.block_count},
           {"iters", t.iters},
           {"diagnostics", t.diagnostics},
           {"config", t.config}};
}

void from_json(const json& j, TrialResult& t) {
  t.q = j.at("q").get<int>();
  t.l = j.at("l").get<int>();
  t.trial = j.at("trial").get<int>();
  t.method = method_from_name(j.at("method").get<std::string>());
  t.status = j.at("status").get<std::string>() == "feasible-certified"
                 ? SolveStatus::FeasibleCertified
                 : SolveStatus::NotCertified;
  t.margin = j.at("margin").get<double>();
  t.wall_time = j.at("wall_time").get<double>();
  t.block_count = j.at("block_count").get<long>();
  t.iters = j.at("iters").get<int>();
  t.diagnostics = j.at("diagnostics").get<std::string>();
  t.config = j.at("config").get<MdofConfig>();
}

void to_json(json& j, const CellStats& c) {
  json methods = json::array();
  for (const auto& m : c.methods)
    methods.push_back(json{{"method", method_name(m.method)},
                           {"trials", m.trials},
                           {"certified", m.certified},
                           {"ratio", m.ratio},
                           {"mean_wall_time", m.mean_wall_time},
                           {"block_count", m.block_count}});
  j = json{{"q", c.q}, {"l", c.l}, {"n", c.n}, {"r", c.r}, {"methods", std::move(methods)}};
}

void from_json(const json& j, CellStats& c) {
  c.q = j.at("q").get<int>();
  c.l = j.at("l").get<int>();
  c.n = j.at("n").get<int>();
  c.r = j.at("r").get<int>();
  c.methods.clear();
  for (const auto& e : j.at("methods")) {
    CellStats::PerMethod m;
    m.method = method_from_name(e.at("method").get<std::string>());
    m.trials = e.at("trials").get<int>();
    m.certified = e.at("certified").get<int>();
    m.ratio = e.at("ratio").get<double>();
    m.mean_wall_time = e.at("mean_wall_time").get<double>();
    m.block_count = e.at("block_count").get<long>();
    c.methods.push_back(std::move(m));
  }
}

void to_json(json& j, const ExperimentReport& r) {
  j = json{{"spec", r.spec},
           {"trials", r.trials},
           {"cells", r.cells},
           {"environment", r.environment}};
}

void from_json(const json& j, ExperimentReport& r) {
  r.spec = j.at("spec").get<ExperimentSpec>();
  r.trials = j.at("trials").get<std::vector<TrialResult>>();
  r.cells = j.at("cells").get<std::vector<CellStats>>();
  r.environment = j.at("environment").get<std::string>();
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

void save_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace lpvstab
