#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace physbc {

/// a . d <= bound, with no epigraph variable.
struct LinearCut {
  std::vector<double> coeffs;
  double bound = 0.0;
};

/// min eta  s.t.  coeffs_i . d + offset_i <= eta  for every row i,
///                lower <= d <= upper,  cuts.
///
/// The epigraph variable eta is implicit (coefficient -1 in every row), so
/// the program is the min-max of the row expressions over the box.
struct EpigraphLp {
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  explicit EpigraphLp(std::size_t dim = 0);

  std::size_t dim = 0;
  std::vector<double> coeffs;   // rows x dim, row-major
  std::vector<double> offsets;  // rows
  std::vector<double> lower;    // dim
  std::vector<double> upper;    // dim
  std::vector<LinearCut> cuts;

  std::size_t rows() const noexcept { return offsets.size(); }
  std::span<const double> row(std::size_t i) const { return {coeffs.data() + i * dim, dim}; }

  void add_row(std::span<const double> row_coeffs, double offset);
  void set_bounds(std::size_t var, double lo, double hi);
  void add_cut(std::vector<double> cut_coeffs, double bound);

  double row_value(std::size_t i, std::span<const double> d) const;
  /// max_i row_value(i, d); argmax (lowest index on ties) via `which`.
  double max_row_value(std::span<const double> d, std::size_t* which = nullptr) const;
  /// Largest violation of the box and cut constraints at d (<= 0 if feasible).
  double max_side_violation(std::span<const double> d) const;

  void validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(SolveStatus status);

struct SolverConfig {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  std::size_t max_iterations = 100'000;
  /// Degenerate pivots in a row before switching to Bland's rule.
  std::size_t bland_after = 50;
  std::size_t minmax_max_iterations = 60'000;
  /// Relative duality-gap target for the direct min-max method.
  double minmax_tol = 1e-10;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  double eta = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> decision;
  std::vector<std::size_t> active_rows;  // rows within tolerance of eta
  std::size_t iterations = 0;
  /// Certified lower bound on the optimum (direct method only; equals eta
  /// for the simplex path).
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Revised simplex on the LP dual. The basis has one column per primal
/// variable, so each pivot costs O(rows * dim). Deterministic: Dantzig
/// pricing with lowest-index ties, Bland's rule after a degenerate streak.
SolveResult solve(const EpigraphLp& lp, const SolverConfig& config = {});

/// Independent check: central-cut ellipsoid method on g(d) = max_i row_i(d)
/// with feasibility cuts for the box and side constraints. Requires a
/// finite box.
SolveResult solve_minmax_direct(const EpigraphLp& lp, const SolverConfig& config = {});

}  // namespace physbc
