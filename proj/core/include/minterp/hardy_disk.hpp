#ifndef MINTERP_HARDY_DISK_HPP
#define MINTERP_HARDY_DISK_HPP

#include <optional>
#include <string>
#include <vector>

#include "minterp/sip_core.hpp"

namespace minterp {
namespace hardy {

/// Multi-point interpolation data in H^p(D): distinct nodes z_j in the open
/// disk and target values s_j.
struct HardyProblem {
  VectorXcd nodes;
  VectorXcd values;
  Exponent p;

  HardyProblem(VectorXcd z, VectorXcd s, Exponent p_);
};

/// f(z) = B(z) * (gamma(z)/B(z))^{2/p} with gamma(z) = sum d_i/(1-conj(z_i)z)
/// and B the Blaschke product over gamma's open-disk zeros.
struct RationalPowerFunction {
  VectorXcd nodes;
  VectorXcd d;
  std::vector<Complex> blaschke_zeros;
  Exponent p;
};

struct SolverReport {
  RationalPowerFunction solution;
  double norm = 0.0;
  VectorXd residuals;       // per-node |f(z_j) - s_j|
  double certificate = 0.0; // orthogonality residual, see solve()
  int iterations = 0;
  std::vector<std::string> warnings;
};

/// gamma(z) = sum_i d_i / (1 - conj(z_i) z). Throws at a pole.
Complex gamma_eval(const VectorXcd& d, const VectorXcd& nodes, Complex z);

/// Coefficients (ascending) of the numerator polynomial of gamma over the
/// common denominator prod (1 - conj(z_i) z); degree <= k-1.
VectorXcd gamma_numerator(const VectorXcd& d, const VectorXcd& nodes);

/// All roots of a polynomial (ascending coefficients) by Durand-Kerner.
std::vector<Complex> polynomial_roots(const VectorXcd& coeffs);

/// Zeros of gamma lying in the open unit disk. Throws if d == 0.
std::vector<Complex> gamma_zeros_in_disk(const VectorXcd& d, const VectorXcd& nodes);

/// prod (z - a_k)/(1 - conj(a_k) z); empty product = 1.
Complex blaschke_eval(const std::vector<Complex>& zeros, Complex z);

/// Evaluate the candidate at z in the closed disk. The branch of
/// log(gamma/B) is fixed by the principal value at z = 0 and continued along
/// the straight segment to z. Throws on branch-tracking failure.
Complex candidate_eval(const RationalPowerFunction& rp, Complex z);

/// Candidate values on the uniform boundary grid e^{it_k}, t_k = 2 pi k/n,
/// branch continued radially to t = 0 and then around the circle.
VectorXcd boundary_values(const RationalPowerFunction& rp, int grid_size);

/// H^p norm of the candidate: |f|^p = |gamma|^2 on the circle, so this is
/// (mean |gamma(e^{it})|^2)^{1/p} on the grid.
double hardy_norm(const RationalPowerFunction& rp, int grid_size);

struct SolveOptions {
  double tol = 1e-9;           // interpolation residual target
  double p_step = 0.1;         // continuation step in p
  int grid = 2048;             // boundary quadrature grid
  int max_newton = 80;
  double fd_step = 1e-7;
  bool compute_certificate = true;
  int certificate_monomials = 16;
  // Warm start: skip the p = 2 anchor and continue from here instead.
  std::optional<std::pair<double, VectorXcd>> warm_start;
};

/// Minimal-norm interpolant in H^p(D) via damped Newton on the representer
/// coefficients with continuation in p from 2 and an outer fixed-point
/// iteration on the Blaschke zero set.
SolverReport solve(const HardyProblem& problem, const SolveOptions& opts = {});

/// Orthogonality residual of a candidate against the node-vanishing basis
/// h_m(z) = prod (z - z_j) * z^m: max_m |[h_m, f]| / (||h_m|| ||f||).
double orthogonality_certificate(const RationalPowerFunction& rp, int grid_size,
                                 int monomials);

struct OracleResult {
  double norm = 0.0;
  VectorXcd coeffs;
  int iterations = 0;
};

/// Independent convex oracle: minimize the discretized boundary p-norm over
/// polynomials of the given degree subject to the interpolation constraints
/// (affine elimination + gradient descent + Newton polish). Upper-bounds the
/// true minimal norm and converges to it as degree grows.
OracleResult truncated_oracle(const HardyProblem& problem, int degree, int grid);

/// Generic version over an arbitrary discrete measure: minimize
/// (sum_g w_g |P(x_g)|^p)^{1/p} over polynomials P of the given degree with
/// P(nodes_j) = values_j.
OracleResult polynomial_min_norm(const VectorXcd& sample_points,
                                 const VectorXd& sample_weights,
                                 const VectorXcd& nodes, const VectorXcd& values,
                                 const Exponent& p, int degree);

}  // namespace hardy
}  // namespace minterp

#endif
