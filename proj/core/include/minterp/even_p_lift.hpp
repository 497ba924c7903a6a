#ifndef MINTERP_EVEN_P_LIFT_HPP
#define MINTERP_EVEN_P_LIFT_HPP

#include <utility>
#include <vector>

#include "minterp/hardy_disk.hpp"
#include "minterp/kernels.hpp"

namespace minterp {
namespace evenp {

/// Minimal-norm interpolant of the p = 2 (RKHS) problem:
/// g(z) = sum_j c_j K(z, z_j), gram(i,j) = K(z_i, z_j), gram * c = values.
struct RkhsSolution {
  SpaceDescriptor space;  // exponent forced to 2
  std::vector<Point> nodes;
  VectorXcd values;
  VectorXcd c;
  MatrixXcd gram;

  Complex eval(const Point& z) const;
};

/// Dense Hermitian solve of the Gram system. Throws if the factorization
/// detects numerically coincident nodes (loss of positive definiteness).
RkhsSolution rkhs_solve(const SpaceDescriptor& space,
                        const std::vector<Point>& nodes, const VectorXcd& values);

/// ||g||_2 = sqrt(c^H gram c) = sqrt(Re sum conj(c_i) s_i).
double rkhs_norm(const RkhsSolution& g);

/// s_i^{p/2} with the principal branch, shifted by the optional per-node
/// branch integers: exp((p/2) (Log s_i + 2 pi i b_i)). Throws on s_i = 0
/// (the lift hypothesis requires nonzero values; use the general solver).
VectorXcd powered_values(const VectorXcd& s, int p,
                         const std::vector<int>& branches = {});

struct LiftCertificate {
  bool zero_free = false;
  double min_modulus_bound = 0.0;
  int grid_used = 0;
  bool branch_consistent = false;
  // True when the triangle-inequality bound applied; false means the
  // non-rigorous dense-sampling fallback (margin factor 10) was used.
  bool analytic_bound = false;

  bool passed() const { return zero_free && branch_consistent; }
};

/// z -> g(z)^{2/p}, branch of log g anchored at the domain reference point
/// and continued along the straight segment to z.
struct LiftedInterpolant {
  RkhsSolution g;
  int p = 2;

  Complex eval(const Point& z) const;
  /// ||f||_p = ||g||_2^{2/p} (valid for certified lifts).
  double norm() const;
};

/// Lift a p = 2 solution computed from powered values s_i^{p/2} to the even
/// exponent p. The certificate is always returned (never thrown through):
/// zero_free via the analytic bound when it applies, else dense sampling;
/// branch_consistent checks f(z_i) = original_values_i to 1e-9. Throws only
/// on malformed input (odd p, zero values, size mismatch).
std::pair<LiftedInterpolant, LiftCertificate> lift(const RkhsSolution& g, int p,
                                                   const VectorXcd& original_values);

struct CrossCheckReport {
  double max_pointwise_deviation = 0.0;
  double norm_deviation = 0.0;
  double solver_norm = 0.0;
  double lift_norm = 0.0;
  LiftCertificate certificate;
};

/// Solve an even-p Hardy disk problem both ways (general solver and lift)
/// and report the deviation on a boundary grid. Throws if the lift
/// certificate fails: the comparison would be meaningless.
CrossCheckReport cross_check_hardy(const hardy::HardyProblem& problem,
                                   int grid = 2048);

}  // namespace evenp
}  // namespace minterp

#endif
