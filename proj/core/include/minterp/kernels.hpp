#ifndef MINTERP_KERNELS_HPP
#define MINTERP_KERNELS_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "minterp/sip_core.hpp"

namespace minterp {

enum class SpaceFamily {
  HardyDisk,        // H^p on the unit disk (= HardyBall with n = 1)
  HardyBall,        // H^p on the unit ball of C^n, Cauchy kernel
  BergmanBall,      // A^p on the unit ball, Bergman kernel
  HardyPolydisk,    // H^p on D^n, product Szego kernel
  HardyHalfPlane,   // H^p on the (poly) upper half-plane
  WeightedBergmanDisk,       // A^p_alpha on D, kernel evaluation only
  WeightedBergmanHalfPlane,  // A^p_alpha on the right half-plane, eval only
};

std::string to_string(SpaceFamily f);

struct SpaceDescriptor {
  SpaceFamily family;
  int n;        // number of complex variables
  Exponent p;
  double alpha; // weight, only meaningful for the weighted families

  SpaceDescriptor(SpaceFamily f, int n_, Exponent p_, double alpha_ = 0.0);

  bool is_weighted() const;
  /// True if z lies in the open domain of the space.
  bool contains(const VectorXcd& z) const;
  void require_inside(const VectorXcd& z) const;
};

using Point = VectorXcd;

Point make_point(Complex z);

/// Reproducing kernel K(w, z) of the space. Hermitian: K(z,w) = conj(K(w,z)).
Complex kernel_eval(const SpaceDescriptor& space, const Point& w, const Point& z);

/// Same value with z allowed on the closure of the domain (w must stay
/// interior, so the denominators are bounded away from zero); used by
/// boundary quadratures.
Complex kernel_eval_closure(const SpaceDescriptor& space, const Point& w,
                            const Point& z);

/// Closed representation of a single-node minimal-norm interpolant:
/// f(z) = value * (kernel ratio)^{exponent}, principal branch.
struct ClosedFormInterpolant {
  SpaceDescriptor space;
  Point node;
  Complex value;
  double exponent_of_kernel_ratio; // 2n/p, 2(n+1)/p, or 2/p per factor
  double norm;
};

/// Unique minimal-norm single-point interpolant for the four closed-form
/// families (Hardy ball/disk, Bergman ball, polydisk, poly-half-plane).
/// Throws for the weighted families.
ClosedFormInterpolant single_point_interpolant(const SpaceDescriptor& space,
                                               const Point& z0, Complex w0);

Complex evaluate_interpolant(const ClosedFormInterpolant& f, const Point& z);

/// (1/2pi int_0^{2pi} |f(e^{it})|^p dt)^{1/p} on a uniform grid;
/// grid_size must be a power of two >= 16.
double hardy_disk_boundary_norm(const std::function<Complex(Complex)>& f,
                                const Exponent& p, int grid_size);

/// A^p(D) norm via radial Gauss-Legendre times angular trapezoid, with the
/// area measure normalized to total mass 1.
double bergman_disk_norm(const std::function<Complex(Complex)>& f,
                         const Exponent& p, int radial, int angular);

/// Weighted A^p_alpha(D) norm, measure (alpha+1)(1-|z|^2)^alpha dnu(z).
double weighted_bergman_disk_norm(const std::function<Complex(Complex)>& f,
                                  const Exponent& p, double alpha, int radial,
                                  int angular);

/// H^p(C_+) norm: (int_R |f(x)|^p dx)^{1/p} through x = tan(theta) with
/// composite Gauss-Legendre panels in theta.
double half_plane_boundary_norm(const std::function<Complex(Complex)>& f,
                                const Exponent& p, int panels, int nodes_per_panel);

/// Monte-Carlo estimates of the multivariable norms (seeded); used only for
/// loose-tolerance checks of the closed formulas.
double hardy_ball_norm_mc(const std::function<Complex(const Point&)>& f,
                          const Exponent& p, int n, int samples, std::uint64_t seed);
double bergman_ball_norm_mc(const std::function<Complex(const Point&)>& f,
                            const Exponent& p, int n, int samples, std::uint64_t seed);
/// Polydisk norm on the n-torus by a tensor trapezoid grid (spectral).
double polydisk_boundary_norm(const std::function<Complex(const Point&)>& f,
                              const Exponent& p, int n, int grid_per_dim);

}  // namespace minterp

#endif
