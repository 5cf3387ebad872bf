#include "lpvstab/sdp.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>

#include "lpvstab/jacobi.hpp"

namespace lpvstab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Over-relaxation factor for the projection steps.
constexpr double kRelaxation = 1.75;

bool is_identity(const MatrixXd& m) {
  return m.rows() == m.cols() && m.isIdentity(1e-14);
}

// ---------- verifier path (Jacobi, no Eigen eigensolvers) ----------

double spectral_norm_jacobi(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  MatrixXd mtm = m.transpose() * m;
  const VectorXd ev = jacobi_eigenvalues<double>(std::move(mtm));
  return std::sqrt(std::max(0.0, ev(ev.size() - 1)));
}

// Term matrices repeat across blocks; memoize their spectral norms.
class SpectralNormCache {
 public:
  double get(const MatrixXd& m) {
    if (is_identity(m) || is_identity(-m)) return 1.0;
    std::vector<double> key(m.data(), m.data() + m.size());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double s = spectral_norm_jacobi(m);
    cache_.emplace(std::move(key), s);
    return s;
  }

 private:
  std::map<std::vector<double>, double> cache_;
};

// ---------- compiled constraint set (solver side) ----------

struct IdentityAdd {
  int var;
  double coef;  // contributes coef * P_var
};

struct MatTerm {
  int var;
  MatrixXd left;
  MatrixXd right;
  double weight;
};

struct CompiledBlock {
  MatrixXd constant;
  bool constant_zero = true;
  std::vector<MatTerm> mat_terms;
  std::vector<IdentityAdd> id_adds;
  double const_fnorm = 0.0;
  double term_weight_sum = 0.0;  // sum |w| sigma(L) sigma(R)
};

struct Compiled {
  int n = 0;
  int var_count = 0;
  std::vector<CompiledBlock> blocks;
};

Compiled compile(const ConstraintSet& cs) {
  Compiled c;
  c.n = cs.n;
  c.var_count = cs.var_count;
  c.blocks.reserve(cs.blocks.size());
  for (const auto& blk : cs.blocks) {
    CompiledBlock cb;
    cb.constant = blk.constant;
    cb.constant_zero = blk.constant.isZero(0.0);
    cb.const_fnorm = blk.constant.norm();
    for (const auto& t : blk.terms) {
      if (t.var < 0 || t.var >= cs.var_count)
        throw DimensionMismatch("solve_feasibility: term references an unknown variable");
      double sl, sr;
      if (is_identity(t.left) && is_identity(t.right)) {
        cb.id_adds.push_back({t.var, 2.0 * t.weight});
        sl = sr = 1.0;
      } else {
        cb.mat_terms.push_back({t.var, t.left, t.right, t.weight});
        sl = t.left.operatorNorm();
        sr = t.right.operatorNorm();
      }
      cb.term_weight_sum += std::abs(t.weight) * sl * sr;
    }
    c.blocks.push_back(std::move(cb));
  }
  return c;
}

void forward(const Compiled& c, const std::vector<MatrixXd>& p,
             std::vector<MatrixXd>& out, bool include_constant) {
  std::vector<char> nonzero(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) nonzero[v] = !p[v].isZero(0.0);

  out.resize(c.blocks.size());
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    const auto& cb = c.blocks[k];
    MatrixXd& b = out[k];
    if (include_constant && !cb.constant_zero)
      b = cb.constant;
    else
      b = MatrixXd::Zero(c.n, c.n);
    for (const auto& add : cb.id_adds)
      if (nonzero[add.var]) b += add.coef * p[add.var];
    for (const auto& t : cb.mat_terms) {
      if (!nonzero[t.var]) continue;
      const MatrixXd tmp = t.left.transpose() * p[t.var] * t.right;
      b += t.weight * (tmp + tmp.transpose());
    }
  }
}

// Adjoint of the linear part: grad_v = sum_k [coef * W_k + w (L W_k R^T + R W_k L^T)].
void adjoint(const Compiled& c, const std::vector<MatrixXd>& w,
             const std::vector<char>& active, std::vector<MatrixXd>& grad) {
  grad.assign(c.var_count, MatrixXd::Zero(c.n, c.n));
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    if (!active[k]) continue;
    const auto& cb = c.blocks[k];
    for (const auto& add : cb.id_adds) grad[add.var] += add.coef * w[k];
    for (const auto& t : cb.mat_terms) {
      const MatrixXd tmp = t.left * w[k] * t.right.transpose();
      grad[t.var] += t.weight * (tmp + tmp.transpose());
    }
  }
}

// ---------- svec / smat (orthonormal symmetric coordinates) ----------

int sym_dim(int n) { return n * (n + 1) / 2; }

void svec_into(const MatrixXd& m, double* dst) {
  const int n = static_cast<int>(m.rows());
  const double rt2 = std::sqrt(2.0);
  int idx = 0;
  for (int a = 0; a < n; ++a) {
    dst[idx++] = m(a, a);
    for (int b = a + 1; b < n; ++b) dst[idx++] = rt2 * m(a, b);
  }
}

void smat_into(const double* src, MatrixXd& m, int n) {
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  m.resize(n, n);
  int idx = 0;
  for (int a = 0; a < n; ++a) {
    m(a, a) = src[idx++];
    for (int b = a + 1; b < n; ++b) {
      m(a, b) = m(b, a) = inv_rt2 * src[idx++];
    }
  }
}

// ---------- Lyapunov warm start ----------

// Solves a^T p + p a = -I by vectorization; empty when a is not stable enough
// for the solution to be positive definite.
std::optional<MatrixXd> lyapunov_identity(const MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const MatrixXd id = MatrixXd::Identity(n, n);
  const MatrixXd at = a.transpose();
  MatrixXd kron = Eigen::kroneckerProduct(id, at) + Eigen::kroneckerProduct(at, id);
  Eigen::PartialPivLU<MatrixXd> lu(kron);
  VectorXd rhs = -Eigen::Map<const VectorXd>(id.data(), n * n);
  VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) return std::nullopt;
  MatrixXd p = Eigen::Map<MatrixXd>(sol.data(), n, n);
  p = 0.5 * (p + p.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(p, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0) return std::nullopt;
  return p;
}

// Vertex matrices attached to each variable, recovered from single-term
// stability blocks (L = A, R = -I, w = 1).
std::vector<std::vector<MatrixXd>> vertex_candidates(const Compiled& c) {
  std::vector<std::vector<MatrixXd>> out(c.var_count);
  for (const auto& cb : c.blocks) {
    if (cb.mat_terms.size() != 1) continue;
    const auto& t = cb.mat_terms.front();
    if (t.weight != 1.0 || !is_identity(-t.right) || is_identity(t.left)) continue;
    auto& list = out[t.var];
    bool seen = false;
    for (const auto& m : list)
      if ((m - t.left).isZero(0.0)) {
        seen = true;
        break;
      }
    if (!seen) list.push_back(t.left);
  }
  return out;
}

void rescale_to_cap(std::vector<MatrixXd>& p) {
  double top = 0.0;
  for (const auto& m : p) top = std::max(top, m.norm());
  if (top > 0.0)
    for (auto& m : p) m *= kNormCap / top;
}

// ---------- solve state ----------

struct EvalResult {
  std::vector<MatrixXd> blocks;
  std::vector<double> lambda_min;
  double t_steer = 0.0;   // min lambda_min / fixed steering scale
  double margin = 0.0;    // verifier-formula margin, Eigen path
};

class Solver {
 public:
  Solver(const ConstraintSet& cs, const SolveOptions& opts, bool allow_aux)
      : cs_(cs), opts_(opts), allow_aux_(allow_aux), c_(compile(cs)),
        start_(Clock::now()) {
    steer_scale_.resize(c_.blocks.size());
    for (std::size_t k = 0; k < c_.blocks.size(); ++k)
      steer_scale_[k] = std::max(
          1.0, c_.blocks[k].const_fnorm + c_.blocks[k].term_weight_sum * kNormCap);
  }

  Outcome run() {
    Outcome out;
    std::vector<MatrixXd> x = best_warm_start();
    EvalResult ev;
    evaluate(x, ev);

    std::vector<MatrixXd> best_x = x;
    double best_margin = ev.margin;
    const double goal = std::max(20.0 * opts_.epsilon, 2e-5);

    int sweeps = 0;
    std::string stop = "margin goal reached";

    if (ev.margin < goal) {
      build_gram();
      const bool trace = std::getenv("LPVSTAB_TRACE") != nullptr;
      // Slab floor for the projections, in steering units: slow-start low,
      // double once the iterate settles inside, halve on plateau.
      double tau = 4.0 * goal;
      const double tau_min = std::max(2.0 * opts_.epsilon, 1e-7);
      double best_t = ev.t_steer;
      int plateau = 0;

      while (true) {
        if (sweeps >= opts_.max_iters) {
          stop = "iteration budget exhausted";
          break;
        }
        if (elapsed_s(start_) > opts_.time_budget) {
          stop = "time budget exhausted";
          break;
        }

        clip_and_refit(x, ev, tau);
        ++sweeps;
        evaluate(x, ev);

        if (trace && sweeps % 10 == 0)
          std::fprintf(stderr, "  sweep %4d  tau %.3e  t %.6e  margin %.6e\n",
                       sweeps, tau, ev.t_steer, ev.margin);

        if (ev.margin > best_margin) {
          best_margin = ev.margin;
          best_x = x;
        }
        if (ev.margin >= goal) break;

        if (ev.t_steer > best_t + 1e-3 * tau) {
          best_t = ev.t_steer;
          plateau = 0;
        } else if (++plateau >= 12) {
          tau *= 0.5;
          plateau = 0;
          if (tau < tau_min) {
            stop = "stalled";
            break;
          }
        }
        if (ev.t_steer >= 0.95 * tau) tau *= 2.0;  // inside the slab, push on
      }
    }

    out.iters = sweeps;
    out.assignment = best_x;
    out.margin = best_margin;
    out.diagnostics = stop;
    if (best_margin >= opts_.epsilon) {
      const MarginReport check =
          verify_certificate(cs_, best_x, opts_.epsilon);
      out.margin = check.min_margin;
      if (check.pass) {
        out.status = SolveStatus::FeasibleCertified;
        out.diagnostics = sweeps == 0 ? "certified from warm start"
                                      : "certified after " + std::to_string(sweeps) + " sweeps";
      } else {
        out.diagnostics += "; verification rejected the candidate";
      }
    }
    out.wall_time = elapsed_s(start_);
    return out;
  }

 private:
  std::vector<MatrixXd> best_warm_start() {
    const auto verts = vertex_candidates(c_);
    const MatrixXd id = MatrixXd::Identity(c_.n, c_.n);
    std::vector<std::vector<MatrixXd>> cands;

    std::vector<MatrixXd> all;
    for (const auto& list : verts) all.insert(all.end(), list.begin(), list.end());

    std::optional<MatrixXd> common;
    if (!all.empty()) {
      MatrixXd mean = MatrixXd::Zero(c_.n, c_.n);
      for (const auto& a : all) mean += a;
      mean /= static_cast<double>(all.size());
      common = lyapunov_identity(mean);
    }

    if (c_.var_count == 1) {
      if (common) cands.push_back({*common});
      if (!all.empty()) {
        MatrixXd acc = MatrixXd::Zero(c_.n, c_.n);
        int cnt = 0;
        for (const auto& a : all)
          if (auto p = lyapunov_identity(a)) {
            acc += *p;
            ++cnt;
          }
        if (cnt > 0) cands.push_back({acc / cnt});
      }
      cands.push_back({id});
    } else {
      if (auto tied = tied_variable_start(all))
        cands.push_back(std::vector<MatrixXd>(c_.var_count, *tied));
      std::vector<MatrixXd> per(c_.var_count, id);
      bool any = false;
      for (int v = 0; v < c_.var_count; ++v) {
        if (!verts[v].empty())
          if (auto p = lyapunov_identity(verts[v].front())) {
            per[v] = *p;
            any = true;
            continue;
          }
        if (common) per[v] = *common;
      }
      if (common) cands.push_back(std::vector<MatrixXd>(c_.var_count, *common));
      if (any) {
        cands.push_back(per);
        if (common) {
          std::vector<MatrixXd> blend = per;
          for (auto& m : blend) m = 0.5 * m + 0.5 * (*common);
          cands.push_back(std::move(blend));
        }
      }
      cands.push_back(std::vector<MatrixXd>(c_.var_count, id));
    }

    double best = -std::numeric_limits<double>::infinity();
    std::vector<MatrixXd> pick;
    EvalResult ev;
    for (auto& cand : cands) {
      rescale_to_cap(cand);
      evaluate(cand, ev);
      if (ev.margin > best) {
        best = ev.margin;
        pick = std::move(cand);
      }
    }
    return pick;
  }

  // Common-P pre-solve on the recovered vertex matrices. Whenever the rate
  // columns sum to zero a common quadratic certificate satisfies the full
  // set, so this single cheap low-dimensional solve settles most instances.
  std::optional<MatrixXd> tied_variable_start(const std::vector<MatrixXd>& all) {
    if (!allow_aux_ || all.empty()) return std::nullopt;
    ConstraintSet aux;
    aux.n = c_.n;
    aux.var_count = 1;
    aux.blocks.push_back([&] {
      AffineBlock blk;
      blk.constant = MatrixXd::Zero(c_.n, c_.n);
      blk.terms.push_back({0, MatrixXd::Identity(c_.n, c_.n),
                           MatrixXd::Identity(c_.n, c_.n), 0.5});
      blk.tag = "aux P > 0";
      return blk;
    }());
    for (const auto& a : all) {
      AffineBlock blk;
      blk.constant = MatrixXd::Zero(c_.n, c_.n);
      blk.terms.push_back({0, a, -MatrixXd::Identity(c_.n, c_.n), 1.0});
      blk.tag = "aux vertex";
      aux.blocks.push_back(std::move(blk));
    }
    SolveOptions aux_opts = opts_;
    aux_opts.max_iters = std::min(opts_.max_iters, 800);
    aux_opts.time_budget = std::max(0.05, 0.2 * opts_.time_budget);
    const Outcome aux_out = Solver(aux, aux_opts, /*allow_aux=*/false).run();
    if (aux_out.assignment.empty() || aux_out.margin <= 0.0) return std::nullopt;
    return aux_out.assignment.front();
  }

  void evaluate(const std::vector<MatrixXd>& x, EvalResult& ev) {
    forward(c_, x, ev.blocks, /*include_constant=*/true);
    ev.lambda_min.resize(ev.blocks.size());
    double x_norm = 0.0;
    for (const auto& p : x) x_norm = std::max(x_norm, p.operatorNorm());

    double t_steer = std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    for (std::size_t k = 0; k < ev.blocks.size(); ++k) {
      es.compute(ev.blocks[k], Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues()(0);
      ev.lambda_min[k] = lmin;
      t_steer = std::min(t_steer, lmin / steer_scale_[k]);
      const double live = std::max(
          1.0, c_.blocks[k].const_fnorm + c_.blocks[k].term_weight_sum * x_norm);
      margin = std::min(margin, lmin / live);
    }
    ev.t_steer = t_steer;
    ev.margin = margin;
  }

  void build_gram() {
    const int sd = sym_dim(c_.n);
    const int d = c_.var_count * sd;
    gram_.resize(d, d);

    std::vector<MatrixXd> basis(c_.var_count, MatrixXd::Zero(c_.n, c_.n));
    std::vector<MatrixXd> blocks, grad;
    std::vector<char> active;
    VectorXd unit = VectorXd::Zero(sd);
    for (int v = 0; v < c_.var_count; ++v) {
      for (int s = 0; s < sd; ++s) {
        unit(s) = 1.0;
        smat_into(unit.data(), basis[v], c_.n);
        unit(s) = 0.0;

        forward(c_, basis, blocks, /*include_constant=*/false);
        active.resize(blocks.size());
        for (std::size_t k = 0; k < blocks.size(); ++k)
          active[k] = !blocks[k].isZero(0.0);
        adjoint(c_, blocks, active, grad);

        double* col = gram_.col(v * sd + s).data();
        for (int u = 0; u < c_.var_count; ++u) svec_into(grad[u], col + u * sd);
      }
      basis[v].setZero();
    }
    gram_ = 0.5 * (gram_ + gram_.transpose());
    gram_.diagonal().array() += 1e-12 * std::max(1.0, gram_.norm());
    ldlt_.compute(gram_);
  }

  void clip_and_refit(std::vector<MatrixXd>& x, const EvalResult& ev,
                      double tau) {
    const std::size_t nb = c_.blocks.size();
    std::vector<MatrixXd> resid(nb);
    std::vector<char> active(nb, 0);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    for (std::size_t k = 0; k < nb; ++k) {
      const double floor = tau * steer_scale_[k];
      if (ev.lambda_min[k] >= floor) continue;
      es.compute(ev.blocks[k]);
      const VectorXd& ew = es.eigenvalues();
      VectorXd lifted = ew.cwiseMax(floor) - ew;
      resid[k] = es.eigenvectors() * lifted.asDiagonal() *
                 es.eigenvectors().transpose();
      active[k] = 1;
    }

    std::vector<MatrixXd> grad;
    adjoint(c_, resid, active, grad);

    const int sd = sym_dim(c_.n);
    VectorXd rhs(c_.var_count * sd);
    for (int v = 0; v < c_.var_count; ++v)
      svec_into(grad[v], rhs.data() + v * sd);
    const VectorXd delta = ldlt_.solve(rhs);
    MatrixXd dm;
    for (int v = 0; v < c_.var_count; ++v) {
      smat_into(delta.data() + v * sd, dm, c_.n);
      x[v] += kRelaxation * dm;
    }
    double top = 0.0;
    for (const auto& m : x) top = std::max(top, m.norm());
    if (top > kNormCap)
      for (auto& m : x) m *= kNormCap / top;
  }

  const ConstraintSet& cs_;
  SolveOptions opts_;
  bool allow_aux_;
  Compiled c_;
  Clock::time_point start_;
  std::vector<double> steer_scale_;
  MatrixXd gram_;
  Eigen::LDLT<MatrixXd> ldlt_;
};

}  // namespace

void SolveOptions::validate() const {
  if (epsilon <= 0.0) throw std::invalid_argument("SolveOptions: epsilon must be positive");
  if (max_iters <= 0 || time_budget <= 0.0)
    throw std::invalid_argument("SolveOptions: budgets must be positive");
}

Outcome solve_feasibility(const ConstraintSet& cs, const SolveOptions& opts) {
  opts.validate();
  if (cs.var_count < 1 || cs.blocks.empty())
    throw std::invalid_argument("solve_feasibility: constraint set is empty");
  return Solver(cs, opts, /*allow_aux=*/cs.var_count > 1).run();
}

MarginReport verify_certificate(const ConstraintSet& cs,
                                const std::vector<Eigen::MatrixXd>& assign,
                                double epsilon) {
  const std::vector<MatrixXd> numeric = substitute(cs, assign);

  SpectralNormCache norms;
  double x_norm = 0.0;
  for (const auto& p : assign) x_norm = std::max(x_norm, spectral_norm_jacobi(p));

  MarginReport report;
  report.blocks.reserve(numeric.size());
  report.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < numeric.size(); ++k) {
    const auto& blk = cs.blocks[k];
    MatrixXd sym = 0.5 * (numeric[k] + numeric[k].transpose());
    const VectorXd ev = jacobi_eigenvalues<double>(std::move(sym));

    double weight_sum = 0.0;
    for (const auto& t : blk.terms)
      weight_sum += std::abs(t.weight) * norms.get(t.left) * norms.get(t.right);

    MarginReport::Block rb;
    rb.tag = blk.tag;
    rb.lambda_min = ev(0);
    rb.scale = std::max(1.0, blk.constant.norm() + weight_sum * x_norm);
    rb.margin = rb.lambda_min / rb.scale;
    report.min_margin = std::min(report.min_margin, rb.margin);
    report.blocks.push_back(std::move(rb));
  }
  report.pass = report.min_margin >= epsilon;
  return report;
}

double min_eig(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols())
    throw DimensionMismatch("min_eig: matrix must be square");
  MatrixXd sym = 0.5 * (s + s.transpose());
  return jacobi_eigenvalues<double>(std::move(sym))(0);
}

}  // namespace lpvstab
