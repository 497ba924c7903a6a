#include "minterp/kernels.hpp"

#include <cmath>
#include <random>

#include "minterp/quadrature.hpp"

namespace minterp {

namespace {

// <z, w>_Eucl = sum z_i conj(w_i)
Complex inner(const VectorXcd& z, const VectorXcd& w) {
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) acc += z[i] * std::conj(w[i]);
  return acc;
}

Complex cpow(Complex base, double expo) { return std::pow(base, expo); }

}  // namespace

std::string to_string(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::HardyDisk: return "hardy-disk";
    case SpaceFamily::HardyBall: return "hardy-ball";
    case SpaceFamily::BergmanBall: return "bergman-ball";
    case SpaceFamily::HardyPolydisk: return "hardy-polydisk";
    case SpaceFamily::HardyHalfPlane: return "hardy-half-plane";
    case SpaceFamily::WeightedBergmanDisk: return "weighted-bergman-disk";
    case SpaceFamily::WeightedBergmanHalfPlane: return "weighted-bergman-half-plane";
  }
  return "?";
}

SpaceDescriptor::SpaceDescriptor(SpaceFamily f, int n_, Exponent p_, double alpha_)
    : family(f), n(n_), p(p_), alpha(alpha_) {
  if (n < 1) throw std::invalid_argument("SpaceDescriptor: n must be >= 1");
  if (is_weighted()) {
    if (n != 1)
      throw std::invalid_argument("SpaceDescriptor: weighted families are single-variable");
    if (!(alpha > -1.0))
      throw std::invalid_argument("SpaceDescriptor: alpha must exceed -1");
  }
  if (family == SpaceFamily::HardyDisk && n != 1)
    throw std::invalid_argument("SpaceDescriptor: HardyDisk requires n = 1");
}

bool SpaceDescriptor::is_weighted() const {
  return family == SpaceFamily::WeightedBergmanDisk ||
         family == SpaceFamily::WeightedBergmanHalfPlane;
}

bool SpaceDescriptor::contains(const VectorXcd& z) const {
  if (z.size() != n) return false;
  switch (family) {
    case SpaceFamily::HardyDisk:
    case SpaceFamily::WeightedBergmanDisk:
      return std::abs(z[0]) < 1.0;
    case SpaceFamily::HardyBall:
    case SpaceFamily::BergmanBall:
      return z.squaredNorm() < 1.0;
    case SpaceFamily::HardyPolydisk:
      for (Eigen::Index i = 0; i < z.size(); ++i)
        if (!(std::abs(z[i]) < 1.0)) return false;
      return true;
    case SpaceFamily::HardyHalfPlane:
      for (Eigen::Index i = 0; i < z.size(); ++i)
        if (!(z[i].imag() > 0.0)) return false;
      return true;
    case SpaceFamily::WeightedBergmanHalfPlane:
      return z[0].real() > 0.0;
  }
  return false;
}

void SpaceDescriptor::require_inside(const VectorXcd& z) const {
  if (!contains(z))
    throw std::invalid_argument("point outside the open domain of " + to_string(family));
}

Point make_point(Complex z) {
  Point pt(1);
  pt[0] = z;
  return pt;
}

namespace {

Complex kernel_eval_raw(const SpaceDescriptor& space, const Point& w, const Point& z) {
  switch (space.family) {
    case SpaceFamily::HardyDisk:
    case SpaceFamily::HardyBall:
      return std::pow(1.0 - inner(z, w), -static_cast<double>(space.n));
    case SpaceFamily::BergmanBall:
      return std::pow(1.0 - inner(z, w), -static_cast<double>(space.n + 1));
    case SpaceFamily::HardyPolydisk: {
      Complex acc = 1.0;
      for (int j = 0; j < space.n; ++j) acc *= 1.0 / (1.0 - z[j] * std::conj(w[j]));
      return acc;
    }
    case SpaceFamily::HardyHalfPlane: {
      Complex acc = 1.0;
      const Complex c(0.0, 2.0 * M_PI);
      for (int j = 0; j < space.n; ++j) acc *= 1.0 / (c * (std::conj(w[j]) - z[j]));
      return acc;
    }
    case SpaceFamily::WeightedBergmanDisk:
      return (space.alpha + 1.0) *
             cpow(1.0 - std::conj(w[0]) * z[0], -(space.alpha + 2.0));
    case SpaceFamily::WeightedBergmanHalfPlane:
      return std::pow(2.0, space.alpha) * (space.alpha + 1.0) *
             cpow(std::conj(w[0]) + z[0], -(space.alpha + 2.0));
  }
  throw std::logic_error("kernel_eval: unreachable");
}

}  // namespace

Complex kernel_eval(const SpaceDescriptor& space, const Point& w, const Point& z) {
  space.require_inside(w);
  space.require_inside(z);
  return kernel_eval_raw(space, w, z);
}

Complex kernel_eval_closure(const SpaceDescriptor& space, const Point& w,
                            const Point& z) {
  space.require_inside(w);
  if (z.size() != w.size())
    throw std::invalid_argument("kernel_eval_closure: dimension mismatch");
  return kernel_eval_raw(space, w, z);
}

ClosedFormInterpolant single_point_interpolant(const SpaceDescriptor& space,
                                               const Point& z0, Complex w0) {
  space.require_inside(z0);
  double expo = 0.0;
  double norm = 0.0;
  switch (space.family) {
    case SpaceFamily::HardyDisk:
    case SpaceFamily::HardyBall:
      expo = 2.0 * space.n / space.p.p;
      norm = std::abs(w0) * std::pow(1.0 - z0.squaredNorm(), space.n / space.p.p);
      break;
    case SpaceFamily::BergmanBall:
      expo = 2.0 * (space.n + 1) / space.p.p;
      norm = std::abs(w0) * std::pow(1.0 - z0.squaredNorm(), (space.n + 1) / space.p.p);
      break;
    case SpaceFamily::HardyPolydisk: {
      expo = 2.0 / space.p.p;
      double prod = 1.0;
      for (int j = 0; j < space.n; ++j)
        prod *= std::pow(1.0 - std::norm(z0[j]), 1.0 / space.p.p);
      norm = std::abs(w0) * prod;
      break;
    }
    case SpaceFamily::HardyHalfPlane: {
      expo = 2.0 / space.p.p;
      double prod = 1.0;
      for (int j = 0; j < space.n; ++j)
        prod *= std::pow(4.0 * M_PI * z0[j].imag(), 1.0 / space.p.p);
      norm = std::abs(w0) * prod;
      break;
    }
    default:
      throw std::invalid_argument(
          "single_point_interpolant: no closed form for " + to_string(space.family));
  }
  return ClosedFormInterpolant{space, z0, w0, expo, norm};
}

Complex evaluate_interpolant(const ClosedFormInterpolant& f, const Point& z) {
  // No domain check: the closed form extends continuously to the closure
  // (the node is interior, so the denominators stay away from zero), and the
  // boundary quadratures rely on exactly that extension.
  if (z.size() != f.node.size())
    throw std::invalid_argument("evaluate_interpolant: dimension mismatch");
  const Point& z0 = f.node;
  switch (f.space.family) {
    case SpaceFamily::HardyDisk:
    case SpaceFamily::HardyBall:
    case SpaceFamily::BergmanBall: {
      // Base has positive real part on the ball, principal branch analytic.
      const Complex base = (1.0 - z0.squaredNorm()) / (1.0 - inner(z, z0));
      return f.value * cpow(base, f.exponent_of_kernel_ratio);
    }
    case SpaceFamily::HardyPolydisk: {
      Complex acc = f.value;
      for (int j = 0; j < f.space.n; ++j) {
        const Complex base = (1.0 - std::norm(z0[j])) / (1.0 - z[j] * std::conj(z0[j]));
        acc *= cpow(base, f.exponent_of_kernel_ratio);
      }
      return acc;
    }
    case SpaceFamily::HardyHalfPlane: {
      Complex acc = f.value;
      for (int j = 0; j < f.space.n; ++j) {
        const Complex base =
            Complex(0.0, 2.0 * z0[j].imag()) / (z[j] - std::conj(z0[j]));
        acc *= cpow(base, f.exponent_of_kernel_ratio);
      }
      return acc;
    }
    default:
      throw std::invalid_argument("evaluate_interpolant: unsupported family");
  }
}

double hardy_disk_boundary_norm(const std::function<Complex(Complex)>& f,
                                const Exponent& p, int grid_size) {
  if (grid_size < 16 || (grid_size & (grid_size - 1)) != 0)
    throw std::invalid_argument("hardy_disk_boundary_norm: grid must be a power of two >= 16");
  double acc = 0.0;
  for (int k = 0; k < grid_size; ++k) {
    const double t = 2.0 * M_PI * k / grid_size;
    const double a = std::abs(f(std::polar(1.0, t)));
    if (!std::isfinite(a))
      throw std::runtime_error("hardy_disk_boundary_norm: non-finite sample");
    acc += std::pow(a, p.p);
  }
  return std::pow(acc / grid_size, 1.0 / p.p);
}

namespace {

double radial_disk_norm(const std::function<Complex(Complex)>& f, const Exponent& p,
                        int radial, int angular,
                        const std::function<double(double)>& radial_weight) {
  Eigen::VectorXd r, wr;
  gauss_legendre(radial, 0.0, 1.0, r, wr);
  double acc = 0.0;
  for (int i = 0; i < radial; ++i) {
    double ring = 0.0;
    for (int k = 0; k < angular; ++k) {
      const double t = 2.0 * M_PI * k / angular;
      ring += std::pow(std::abs(f(std::polar(r[i], t))), p.p);
    }
    ring /= angular;
    acc += wr[i] * 2.0 * r[i] * radial_weight(r[i]) * ring;
  }
  return std::pow(acc, 1.0 / p.p);
}

}  // namespace

double bergman_disk_norm(const std::function<Complex(Complex)>& f,
                         const Exponent& p, int radial, int angular) {
  return radial_disk_norm(f, p, radial, angular, [](double) { return 1.0; });
}

double weighted_bergman_disk_norm(const std::function<Complex(Complex)>& f,
                                  const Exponent& p, double alpha, int radial,
                                  int angular) {
  return radial_disk_norm(f, p, radial, angular, [alpha](double r) {
    return (alpha + 1.0) * std::pow(1.0 - r * r, alpha);
  });
}

double half_plane_boundary_norm(const std::function<Complex(Complex)>& f,
                                const Exponent& p, int panels, int nodes_per_panel) {
  Eigen::VectorXd u, wu;
  gauss_legendre(nodes_per_panel, u, wu);
  double acc = 0.0;
  const double width = M_PI / panels;
  for (int pa = 0; pa < panels; ++pa) {
    const double a = -0.5 * M_PI + pa * width;
    for (int i = 0; i < nodes_per_panel; ++i) {
      const double th = a + 0.5 * width * (u[i] + 1.0);
      const double x = std::tan(th);
      const double jac = 1.0 + x * x;  // sec^2
      acc += 0.5 * width * wu[i] * jac * std::pow(std::abs(f(Complex(x, 0.0))), p.p);
    }
  }
  return std::pow(acc, 1.0 / p.p);
}

double hardy_ball_norm_mc(const std::function<Complex(const Point&)>& f,
                          const Exponent& p, int n, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  double acc = 0.0;
  Point z(n);
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < n; ++j) z[j] = Complex(g(rng), g(rng));
    z /= z.norm();
    acc += std::pow(std::abs(f(z)), p.p);
  }
  return std::pow(acc / samples, 1.0 / p.p);
}

double bergman_ball_norm_mc(const std::function<Complex(const Point&)>& f,
                            const Exponent& p, int n, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double acc = 0.0;
  Point z(n);
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < n; ++j) z[j] = Complex(g(rng), g(rng));
    z *= std::pow(u(rng), 1.0 / (2.0 * n)) / z.norm();
    acc += std::pow(std::abs(f(z)), p.p);
  }
  return std::pow(acc / samples, 1.0 / p.p);
}

double polydisk_boundary_norm(const std::function<Complex(const Point&)>& f,
                              const Exponent& p, int n, int grid_per_dim) {
  const int m = grid_per_dim;
  std::vector<int> idx(n, 0);
  Point z(n);
  double acc = 0.0;
  long total = 1;
  for (int j = 0; j < n; ++j) total *= m;
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int j = 0; j < n; ++j) {
      idx[j] = static_cast<int>(rem % m);
      rem /= m;
      z[j] = std::polar(1.0, 2.0 * M_PI * idx[j] / m);
    }
    acc += std::pow(std::abs(f(z)), p.p);
  }
  return std::pow(acc / total, 1.0 / p.p);
}

}  // namespace minterp
