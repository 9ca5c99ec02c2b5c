#include "physbc/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "physbc/error.hpp"

namespace physbc {

EpigraphLp::EpigraphLp(std::size_t dim_)
    : dim(dim_), lower(dim_, -kInf), upper(dim_, kInf) {}

void EpigraphLp::add_row(std::span<const double> row_coeffs, double offset) {
  if (row_coeffs.size() != dim) {
    fail(ErrorKind::kInvalidArgument, "row has " + std::to_string(row_coeffs.size()) +
                                          " coefficients, program has " + std::to_string(dim) +
                                          " variables");
  }
  coeffs.insert(coeffs.end(), row_coeffs.begin(), row_coeffs.end());
  offsets.push_back(offset);
}

void EpigraphLp::set_bounds(std::size_t var, double lo, double hi) {
  if (var >= dim || !(lo <= hi)) fail(ErrorKind::kInvalidArgument, "bad variable bounds");
  lower[var] = lo;
  upper[var] = hi;
}

void EpigraphLp::add_cut(std::vector<double> cut_coeffs, double bound) {
  if (cut_coeffs.size() != dim) fail(ErrorKind::kInvalidArgument, "cut dimension mismatch");
  cuts.push_back({std::move(cut_coeffs), bound});
}

double EpigraphLp::row_value(std::size_t i, std::span<const double> d) const {
  const double* c = coeffs.data() + i * dim;
  double v = offsets[i];
  for (std::size_t a = 0; a < dim; ++a) v += c[a] * d[a];
  return v;
}

double EpigraphLp::max_row_value(std::span<const double> d, std::size_t* which) const {
  double best = -kInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < rows(); ++i) {
    const double v = row_value(i, d);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (which) *which = arg;
  return best;
}

double EpigraphLp::max_side_violation(std::span<const double> d) const {
  double worst = -kInf;
  for (std::size_t a = 0; a < dim; ++a) {
    worst = std::max({worst, lower[a] - d[a], d[a] - upper[a]});
  }
  for (const auto& cut : cuts) {
    double v = -cut.bound;
    for (std::size_t a = 0; a < dim; ++a) v += cut.coeffs[a] * d[a];
    worst = std::max(worst, v);
  }
  return worst;
}

void EpigraphLp::validate() const {
  if (dim == 0) fail(ErrorKind::kInvalidArgument, "program has no decision variables");
  if (rows() == 0) fail(ErrorKind::kInvalidArgument, "program has no rows");
  if (coeffs.size() != rows() * dim || lower.size() != dim || upper.size() != dim) {
    fail(ErrorKind::kInvalidArgument, "program arrays are inconsistent");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) fail(ErrorKind::kInvalidArgument, "row coefficient is not finite");
  }
  for (double c : offsets) {
    if (!std::isfinite(c)) fail(ErrorKind::kInvalidArgument, "row offset is not finite");
  }
  for (std::size_t a = 0; a < dim; ++a) {
    if (std::isnan(lower[a]) || std::isnan(upper[a]) || lower[a] > upper[a]) {
      fail(ErrorKind::kInvalidArgument, "variable bounds are inconsistent");
    }
  }
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

std::vector<std::size_t> active_rows_at(const EpigraphLp& lp, std::span<const double> d,
                                        double eta, double tol) {
  std::vector<std::size_t> active;
  const double cutoff = eta - tol * (1.0 + std::abs(eta));
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    if (lp.row_value(i, d) >= cutoff) active.push_back(i);
  }
  return active;
}

// Dual of  min eta  s.t.  G v <= h  (v = [d; eta] free):
//   min h.y  s.t.  G^T y = -e_eta,  y >= 0.
// The eta equality row is negated so the right-hand side is e_eta >= 0.
// Columns 0..rows-1 are data rows, then box/cut rows, then one artificial
// per equality row.
class DualSimplex {
 public:
  DualSimplex(const EpigraphLp& lp, const SolverConfig& config)
      : lp_(lp), config_(config), k_(lp.dim + 1), data_cols_(lp.rows()) {
    for (std::size_t a = 0; a < lp.dim; ++a) {
      if (std::isfinite(lp.upper[a])) add_side(unit(a, 1.0), lp.upper[a]);
      if (std::isfinite(lp.lower[a])) add_side(unit(a, -1.0), -lp.lower[a]);
    }
    for (const auto& cut : lp.cuts) {
      std::vector<double> g(cut.coeffs);
      g.push_back(0.0);
      add_side(std::move(g), cut.bound);
    }
    real_cols_ = data_cols_ + side_h_.size();
  }

  SolveResult run() {
    std::vector<std::size_t> basis(k_);
    for (std::size_t r = 0; r < k_; ++r) basis[r] = real_cols_ + r;
    std::vector<char> in_basis(real_cols_, 0);

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k_));
    rhs(static_cast<Eigen::Index>(k_ - 1)) = 1.0;

    int phase = 1;
    std::size_t degenerate_streak = 0;
    Eigen::MatrixXd bmat(k_, k_);
    Eigen::VectorXd col(k_);
    SolveResult result;

    for (std::size_t iter = 0; iter < config_.max_iterations; ++iter) {
      result.iterations = iter;
      for (std::size_t l = 0; l < k_; ++l) {
        fill_column(basis[l], col);
        bmat.col(static_cast<Eigen::Index>(l)) = col;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(bmat);
      if (!lu.isInvertible()) fail(ErrorKind::kInternal, "simplex basis became singular");
      const Eigen::MatrixXd binv = lu.inverse();
      Eigen::VectorXd xb = binv * rhs;
      Eigen::VectorXd cb(k_);
      for (std::size_t l = 0; l < k_; ++l) cb(static_cast<Eigen::Index>(l)) = cost(basis[l], phase);
      const Eigen::VectorXd pi = binv.transpose() * cb;

      const bool bland = degenerate_streak >= config_.bland_after;
      std::size_t entering = real_cols_;
      double best = 0.0;
      for (std::size_t j = 0; j < real_cols_; ++j) {
        if (in_basis[j]) continue;
        double scale = 0.0;
        const double dot = priced_dot(j, pi, scale);
        const double c = cost(j, phase);
        const double reduced = c - dot;
        const double tol = config_.optimality_tol * (1.0 + std::abs(c) + scale);
        if (reduced < -tol && reduced < best) {
          best = reduced;
          entering = j;
          if (bland) break;
        }
      }

      if (entering == real_cols_) {
        if (phase == 1) {
          double infeasibility = 0.0;
          for (std::size_t l = 0; l < k_; ++l) {
            if (basis[l] >= real_cols_) infeasibility += std::max(0.0, xb(static_cast<Eigen::Index>(l)));
          }
          if (infeasibility > config_.feasibility_tol) {
            result.status = SolveStatus::kUnbounded;
            return result;
          }
          phase = 2;
          degenerate_streak = 0;
          continue;
        }
        return finish(pi, result);
      }

      fill_column(entering, col);
      const Eigen::VectorXd u = binv * col;
      const double piv_tol = 1e-11 * std::max(1.0, u.cwiseAbs().maxCoeff());
      std::size_t leave = k_;
      double theta = EpigraphLp::kInf;
      for (std::size_t l = 0; l < k_; ++l) {
        const double ul = u(static_cast<Eigen::Index>(l));
        double ratio;
        if (phase == 2 && basis[l] >= real_cols_) {
          // Artificials left at zero must stay there.
          if (std::abs(ul) <= piv_tol) continue;
          ratio = 0.0;
        } else {
          if (ul <= piv_tol) continue;
          ratio = std::max(0.0, xb(static_cast<Eigen::Index>(l))) / ul;
        }
        if (ratio < theta || (ratio == theta && basis[l] < basis[leave])) {
          theta = ratio;
          leave = l;
        }
      }
      if (leave == k_) {
        if (phase == 1) fail(ErrorKind::kInternal, "phase-one simplex reported an unbounded ray");
        result.status = SolveStatus::kInfeasible;
        return result;
      }
      degenerate_streak = theta <= 1e-14 ? degenerate_streak + 1 : 0;
      if (basis[leave] < real_cols_) in_basis[basis[leave]] = 0;
      basis[leave] = entering;
      in_basis[entering] = 1;
    }
    result.status = SolveStatus::kIterationLimit;
    return result;
  }

 private:
  std::vector<double> unit(std::size_t a, double sign) const {
    std::vector<double> g(k_, 0.0);
    g[a] = sign;
    return g;
  }

  void add_side(std::vector<double> g, double h) {
    side_g_.insert(side_g_.end(), g.begin(), g.end());
    side_h_.push_back(h);
  }

  // Primal right-hand side h_j of real column j.
  double h(std::size_t j) const {
    return j < data_cols_ ? -lp_.offsets[j] : side_h_[j - data_cols_];
  }

  double cost(std::size_t j, int phase) const {
    if (j >= real_cols_) return phase == 1 ? 1.0 : 0.0;
    return phase == 1 ? 0.0 : h(j);
  }

  // Column j with the eta row negated.
  void fill_column(std::size_t j, Eigen::VectorXd& out) const {
    const std::size_t dim = lp_.dim;
    if (j < data_cols_) {
      auto row = lp_.row(j);
      for (std::size_t a = 0; a < dim; ++a) out(static_cast<Eigen::Index>(a)) = row[a];
      out(static_cast<Eigen::Index>(dim)) = 1.0;
    } else if (j < real_cols_) {
      const double* g = side_g_.data() + (j - data_cols_) * k_;
      for (std::size_t a = 0; a < dim; ++a) out(static_cast<Eigen::Index>(a)) = g[a];
      out(static_cast<Eigen::Index>(dim)) = -g[dim];
    } else {
      out.setZero();
      out(static_cast<Eigen::Index>(j - real_cols_)) = 1.0;
    }
  }

  double priced_dot(std::size_t j, const Eigen::VectorXd& pi, double& scale) const {
    const std::size_t dim = lp_.dim;
    double dot = 0.0;
    scale = 0.0;
    if (j < data_cols_) {
      const double* row = lp_.coeffs.data() + j * dim;
      for (std::size_t a = 0; a < dim; ++a) {
        const double t = pi(static_cast<Eigen::Index>(a)) * row[a];
        dot += t;
        scale += std::abs(t);
      }
      const double t = pi(static_cast<Eigen::Index>(dim));
      dot += t;
      scale += std::abs(t);
    } else {
      const double* g = side_g_.data() + (j - data_cols_) * k_;
      for (std::size_t a = 0; a < dim; ++a) {
        const double t = pi(static_cast<Eigen::Index>(a)) * g[a];
        dot += t;
        scale += std::abs(t);
      }
      const double t = -pi(static_cast<Eigen::Index>(dim)) * g[dim];
      dot += t;
      scale += std::abs(t);
    }
    return dot;
  }

  SolveResult finish(const Eigen::VectorXd& pi, SolveResult& result) const {
    result.decision.resize(lp_.dim);
    for (std::size_t a = 0; a < lp_.dim; ++a) result.decision[a] = pi(static_cast<Eigen::Index>(a));
    const double violation = lp_.max_side_violation(result.decision);
    double scale = 1.0;
    for (double v : result.decision) scale = std::max(scale, std::abs(v));
    if (violation > 1e-7 * scale) {
      fail(ErrorKind::kInternal, "simplex optimum violates a bound by " + std::to_string(violation));
    }
    result.eta = lp_.max_row_value(result.decision);
    result.lower_bound = result.eta;
    result.status = SolveStatus::kOptimal;
    result.active_rows = active_rows_at(lp_, result.decision, result.eta, config_.feasibility_tol);
    return result;
  }

  const EpigraphLp& lp_;
  const SolverConfig& config_;
  std::size_t k_;
  std::size_t data_cols_;
  std::size_t real_cols_ = 0;
  std::vector<double> side_g_;  // side rows x k_
  std::vector<double> side_h_;
};

}  // namespace

SolveResult solve(const EpigraphLp& lp, const SolverConfig& config) {
  lp.validate();
  return DualSimplex(lp, config).run();
}

SolveResult solve_minmax_direct(const EpigraphLp& lp, const SolverConfig& config) {
  lp.validate();
  const std::size_t n = lp.dim;
  for (std::size_t a = 0; a < n; ++a) {
    if (!std::isfinite(lp.lower[a]) || !std::isfinite(lp.upper[a])) {
      SolveResult r;
      r.status = SolveStatus::kUnbounded;
      return r;
    }
  }
  const auto ni = static_cast<Eigen::Index>(n);
  const double nd = static_cast<double>(n);
  Eigen::VectorXd center(ni);
  Eigen::MatrixXd shape = Eigen::MatrixXd::Zero(ni, ni);
  for (std::size_t a = 0; a < n; ++a) {
    const auto ai = static_cast<Eigen::Index>(a);
    center(ai) = 0.5 * (lp.lower[a] + lp.upper[a]);
    const double half = std::max(0.5 * (lp.upper[a] - lp.lower[a]), 1e-12);
    // The ellipsoid sum (x_a/half_a)^2 <= n contains the box.
    shape(ai, ai) = nd * half * half;
  }

  SolveResult result;
  double best = EpigraphLp::kInf;
  double lower = -EpigraphLp::kInf;
  std::vector<double> x(n);
  Eigen::VectorXd grad(ni);

  for (std::size_t iter = 0; iter < config.minmax_max_iterations; ++iter) {
    result.iterations = iter + 1;
    for (std::size_t a = 0; a < n; ++a) x[a] = center(static_cast<Eigen::Index>(a));

    // Most violated side constraint, if any, gives a feasibility cut.
    double worst = 0.0;
    bool infeasible = false;
    for (std::size_t a = 0; a < n; ++a) {
      const auto ai = static_cast<Eigen::Index>(a);
      if (x[a] - lp.upper[a] > worst) {
        worst = x[a] - lp.upper[a];
        grad.setZero();
        grad(ai) = 1.0;
        infeasible = true;
      }
      if (lp.lower[a] - x[a] > worst) {
        worst = lp.lower[a] - x[a];
        grad.setZero();
        grad(ai) = -1.0;
        infeasible = true;
      }
    }
    for (const auto& cut : lp.cuts) {
      double v = -cut.bound;
      for (std::size_t a = 0; a < n; ++a) v += cut.coeffs[a] * x[a];
      if (v > worst) {
        worst = v;
        for (std::size_t a = 0; a < n; ++a) grad(static_cast<Eigen::Index>(a)) = cut.coeffs[a];
        infeasible = true;
      }
    }

    if (!infeasible) {
      std::size_t arg = 0;
      const double value = lp.max_row_value(x, &arg);
      auto row = lp.row(arg);
      for (std::size_t a = 0; a < n; ++a) grad(static_cast<Eigen::Index>(a)) = row[a];
      if (value < best) {
        best = value;
        result.decision = x;
      }
      const double spread = std::sqrt(std::max(0.0, grad.dot(shape * grad)));
      if (spread == 0.0) {
        // Zero subgradient: x minimises the max over all of R^n.
        lower = value;
      } else {
        lower = std::max(lower, value - spread);
      }
      if (best - lower <= config.minmax_tol * (1.0 + std::abs(best))) {
        result.status = SolveStatus::kOptimal;
        break;
      }
    }

    const double gpg = grad.dot(shape * grad);
    if (!(gpg > 0.0)) {
      if (infeasible) {
        result.status = SolveStatus::kInfeasible;
        return result;
      }
      break;
    }
    const Eigen::VectorXd step = shape * grad / std::sqrt(gpg);
    if (n == 1) {
      center -= 0.5 * step;
      shape *= 0.25;
    } else {
      center -= step / (nd + 1.0);
      shape = (nd * nd / (nd * nd - 1.0)) * (shape - (2.0 / (nd + 1.0)) * step * step.transpose());
      shape = 0.5 * (shape + shape.transpose());
    }
  }

  if (result.decision.empty()) {
    result.status = SolveStatus::kIterationLimit;
    return result;
  }
  result.eta = best;
  result.lower_bound = lower;
  result.active_rows = active_rows_at(lp, result.decision, best, 1e-7);
  return result;
}

}  // namespace physbc
