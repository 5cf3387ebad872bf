#include "lpvstab/lmi.hpp"

namespace lpvstab {

std::string method_name(Method m) {
  switch (m) {
    case Method::Quadratic: return "quadratic";
    case Method::PdlfExact: return "pdlf-h";
    case Method::PdlfSimplex: return "pdlf-hbar";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "quadratic") return Method::Quadratic;
  if (name == "pdlf-h") return Method::PdlfExact;
  if (name == "pdlf-hbar") return Method::PdlfSimplex;
  throw std::invalid_argument("unknown method: " + name);
}

namespace {

AffineBlock positivity_block(int n, int var, const std::string& tag) {
  AffineBlock blk;
  blk.constant = Eigen::MatrixXd::Zero(n, n);
  // w (L^T P R + R^T P L) with L = R = I and w = 1/2 is exactly P.
  blk.terms.push_back({var, Eigen::MatrixXd::Identity(n, n),
                       Eigen::MatrixXd::Identity(n, n), 0.5});
  blk.tag = tag;
  return blk;
}

// -(A^T P_v + P_v A) as a single symmetrized term: L = A, R = -I, w = 1.
void add_stability_term(AffineBlock& blk, int var, const Eigen::MatrixXd& a) {
  blk.terms.push_back({var, a, -Eigen::MatrixXd::Identity(a.rows(), a.cols()), 1.0});
}

// -coef * sum_k h_k P_k, one identity term per nonzero coordinate.
void add_rate_terms(AffineBlock& blk, const Eigen::VectorXd& h, double coef, int n) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < h.size(); ++k) {
    if (h(k) == 0.0) continue;
    blk.terms.push_back({k, id, id, -coef * h(k) / 2.0});
  }
}

}  // namespace

ConstraintSet assemble_quadratic(const PolytopicSystem& sys) {
  sys.validate();
  ConstraintSet cs;
  cs.n = sys.n;
  cs.var_count = 1;
  cs.method = Method::Quadratic;
  cs.blocks.reserve(sys.r() + 1);

  cs.blocks.push_back(positivity_block(sys.n, 0, "P > 0"));
  for (int i = 0; i < sys.r(); ++i) {
    AffineBlock blk;
    blk.constant = Eigen::MatrixXd::Zero(sys.n, sys.n);
    add_stability_term(blk, 0, sys.vertices[i]);
    blk.tag = "vertex i=" + std::to_string(i + 1);
    cs.blocks.push_back(std::move(blk));
  }
  return cs;
}

ConstraintSet assemble_pdlf(const PolytopicSystem& sys,
                            const VertexMatrix& deriv) {
  sys.validate();
  if (deriv.r() != sys.r())
    throw DimensionMismatch("assemble_pdlf: rate dimension must equal the vertex count");

  const int r = sys.r();
  const int p = deriv.p();
  const int n = sys.n;

  ConstraintSet cs;
  cs.n = n;
  cs.var_count = r;
  cs.method = deriv.kind == VertexKind::ExactPolytope ? Method::PdlfExact
                                                      : Method::PdlfSimplex;
  cs.blocks.reserve(r + static_cast<std::size_t>(p) * r * (r + 1) / 2);

  for (int i = 0; i < r; ++i)
    cs.blocks.push_back(positivity_block(n, i, "P_" + std::to_string(i + 1) + " > 0"));

  for (int l = 0; l < p; ++l) {
    const Eigen::VectorXd h = deriv.columns.col(l);
    for (int i = 0; i < r; ++i) {
      AffineBlock blk;
      blk.constant = Eigen::MatrixXd::Zero(n, n);
      add_stability_term(blk, i, sys.vertices[i]);
      add_rate_terms(blk, h, 1.0, n);
      blk.tag = "vertex i=" + std::to_string(i + 1) + ", deriv-col l=" + std::to_string(l + 1);
      cs.blocks.push_back(std::move(blk));
    }
  }
  for (int l = 0; l < p; ++l) {
    const Eigen::VectorXd h = deriv.columns.col(l);
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        AffineBlock blk;
        blk.constant = Eigen::MatrixXd::Zero(n, n);
        add_stability_term(blk, j, sys.vertices[i]);
        add_stability_term(blk, i, sys.vertices[j]);
        add_rate_terms(blk, h, 2.0, n);
        blk.tag = "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                  "), deriv-col l=" + std::to_string(l + 1);
        cs.blocks.push_back(std::move(blk));
      }
    }
  }
  return cs;
}

std::vector<Eigen::MatrixXd> substitute(
    const ConstraintSet& cs, const std::vector<Eigen::MatrixXd>& assign) {
  if (static_cast<int>(assign.size()) != cs.var_count)
    throw DimensionMismatch("substitute: assignment length must equal var_count");
  for (const auto& p : assign) {
    if (p.rows() != cs.n || p.cols() != cs.n)
      throw DimensionMismatch("substitute: assignment matrices must be n x n");
    if ((p - p.transpose()).lpNorm<Eigen::Infinity>() >
        1e-8 * std::max(1.0, p.lpNorm<Eigen::Infinity>()))
      throw std::invalid_argument("substitute: assignment matrices must be symmetric");
  }

  std::vector<Eigen::MatrixXd> out;
  out.reserve(cs.blocks.size());
  for (const auto& blk : cs.blocks) {
    Eigen::MatrixXd b = blk.constant;
    for (const auto& term : blk.terms) {
      const Eigen::MatrixXd& pv = assign[term.var];
      const Eigen::MatrixXd t = term.left.transpose() * pv * term.right;
      b += term.weight * (t + t.transpose());
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Eigen::MatrixXd> embed_quadratic(const Eigen::MatrixXd& p, int r) {
  return std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(r), p);
}

}  // namespace lpvstab
