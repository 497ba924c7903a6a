#ifndef MINTERP_LP_AFFINE_HPP
#define MINTERP_LP_AFFINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "minterp/sip_core.hpp"

namespace minterp {
namespace lps {

/// Minimal-norm interpolation data in l^p_{n,S}: ||x|| = ||Sx||_p with
/// constraints x_j = s_j on the (0-based, strictly increasing) index set J.
struct LpSProblem {
  MatrixXcd S;
  std::vector<int> J;
  VectorXcd s;
  Exponent p;

  LpSProblem(MatrixXcd S_, std::vector<int> J_, VectorXcd s_, Exponent p_);
  Eigen::Index n() const { return S.rows(); }
  Eigen::Index k() const { return static_cast<Eigen::Index>(J.size()); }
};

struct LpSReport {
  VectorXcd x_min;
  VectorXcd c;          // representer coefficients
  double norm = 0.0;    // ||S x_min||_p
  VectorXd residuals;   // |x_J - s|
  double certificate = 0.0;  // normalized complement residual of x_min^star
  std::optional<double> oracle_gap;
  int iterations = 0;
  std::vector<std::string> warnings;
};

/// x = S^{-1} [(S^{-T} (sum c_j e_{J_j}))^{star_q}] (star with the conjugate
/// exponent, inverting the star_p of the solution).
VectorXcd representer_map(const VectorXcd& c, const LpSProblem& problem);

struct LpSolveOptions {
  double tol = 1e-10;
  double p_step = 0.25;
  double p_step_small = 0.05;  // used below p = 1.2
  int max_newton = 100;
  double fd_step = 1e-7;
};

/// Newton-with-continuation solve of the representer equations. Dispatches
/// between the coefficient parametrization (unknown c, small k) and the
/// complement parametrization (unknowns on the free coordinates, small n-k);
/// both root-find the duality-map optimality condition.
LpSReport solve(const LpSProblem& problem, const LpSolveOptions& opts = {});

struct OracleOptions {
  long max_iters = 50000;
  double grad_tol = 1e-12;
  std::optional<VectorXcd> start;  // initial free variables (size n-k)
};

/// Independent convex oracle: parametrize the feasible affine set over the
/// free coordinates and minimize ||Sx||_p^p by gradient descent with
/// backtracking followed by Newton polish.
std::pair<VectorXcd, double> convex_oracle(const LpSProblem& problem,
                                           const OracleOptions& opts = {});

struct SweepRow {
  double p = 0.0;
  VectorXcd x_min;
  double norm = 0.0;
  bool discontinuity_flag = false;
};

/// Warm-started sweep over a strictly increasing p grid. Discontinuity flags
/// are solver diagnostics, not mathematical findings.
std::vector<SweepRow> p_sweep(const MatrixXcd& S, const std::vector<int>& J,
                              const VectorXcd& s, const std::vector<double>& p_grid,
                              const LpSolveOptions& opts = {});

double lp_s_norm(const VectorXcd& x, const MatrixXcd& S, const Exponent& p);

}  // namespace lps
}  // namespace minterp

#endif
