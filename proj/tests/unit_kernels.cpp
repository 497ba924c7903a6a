#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <minterp/hardy_disk.hpp>
#include <minterp/kernels.hpp>

#include <random>

using namespace minterp;

namespace {

Point pt2(Complex a, Complex b) {
  Point p(2);
  p << a, b;
  return p;
}

Point random_ball_point(std::mt19937_64& rng, int n, double max_radius = 0.9) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, max_radius);
  Point z(n);
  for (int i = 0; i < n; ++i) z[i] = Complex(gauss(rng), gauss(rng));
  z *= unif(rng) / std::max(z.norm(), 1e-12);
  return z;
}

Point random_domain_point(std::mt19937_64& rng, SpaceFamily family, int n) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (family) {
    case SpaceFamily::HardyPolydisk: {
      Point z(n);
      for (int i = 0; i < n; ++i)
        z[i] = std::polar(0.9 * unif(rng), 2.0 * M_PI * unif(rng));
      return z;
    }
    case SpaceFamily::HardyHalfPlane: {
      Point z(n);
      for (int i = 0; i < n; ++i)
        z[i] = Complex(4.0 * unif(rng) - 2.0, 0.1 + 3.0 * unif(rng));
      return z;
    }
    case SpaceFamily::WeightedBergmanHalfPlane: {
      Point z(1);
      z[0] = Complex(0.1 + 3.0 * unif(rng), 4.0 * unif(rng) - 2.0);
      return z;
    }
    default:
      return random_ball_point(rng, n);
  }
}

}  // namespace

TEST_CASE("kernel spot values") {
  const SpaceDescriptor disk(SpaceFamily::HardyDisk, 1, Exponent(2.0));
  CHECK(std::abs(kernel_eval(disk, make_point(0.0), make_point(Complex(0.3, 0.4))) -
                 1.0) < 1e-15);

  const SpaceDescriptor berg2(SpaceFamily::BergmanBall, 2, Exponent(4.0));
  const Point z = pt2(0.25, 0.75);
  CHECK(std::abs(kernel_eval(berg2, z, z) - 4096.0 / 216.0) < 1e-12);

  const SpaceDescriptor half(SpaceFamily::HardyHalfPlane, 1, Exponent(2.0));
  const Point i1 = make_point(Complex(0.0, 1.0));
  CHECK(std::abs(kernel_eval(half, i1, i1) - 1.0 / (4.0 * M_PI)) < 1e-15);

  const SpaceDescriptor wdisk(SpaceFamily::WeightedBergmanDisk, 1, Exponent(2.0), 2.0);
  // (alpha+1)/(1-conj(w)z)^{alpha+2} at w=z=0.
  CHECK(std::abs(kernel_eval(wdisk, make_point(0.0), make_point(0.0)) - 3.0) < 1e-15);

  const SpaceDescriptor whalf(SpaceFamily::WeightedBergmanHalfPlane, 1,
                              Exponent(2.0), 1.0);
  // 2^alpha (alpha+1)/(conj(w)+z)^{alpha+2} at w=z=1: 2*2/2^3 = 1/2.
  CHECK(std::abs(kernel_eval(whalf, make_point(1.0), make_point(1.0)) - 0.5) < 1e-14);
}

TEST_CASE("kernels are Hermitian for random pairs") {
  struct Config {
    SpaceFamily family;
    int n;
    double alpha;
  };
  const Config configs[] = {
      {SpaceFamily::HardyDisk, 1, 0.0},
      {SpaceFamily::HardyBall, 2, 0.0},
      {SpaceFamily::BergmanBall, 2, 0.0},
      {SpaceFamily::HardyPolydisk, 2, 0.0},
      {SpaceFamily::HardyHalfPlane, 1, 0.0},
      {SpaceFamily::WeightedBergmanDisk, 1, 1.5},
      {SpaceFamily::WeightedBergmanHalfPlane, 1, 0.5},
  };
  std::mt19937_64 rng(101);
  for (const auto& cfg : configs) {
    const SpaceDescriptor space(cfg.family, cfg.n, Exponent(2.5), cfg.alpha);
    for (int trial = 0; trial < 200; ++trial) {
      const Point w = random_domain_point(rng, cfg.family, cfg.n);
      const Point z = random_domain_point(rng, cfg.family, cfg.n);
      const Complex a = kernel_eval(space, w, z);
      const Complex b = kernel_eval(space, z, w);
      CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::abs(a));
    }
  }
}

TEST_CASE("kernel_eval rejects points outside the domain") {
  const SpaceDescriptor disk(SpaceFamily::HardyDisk, 1, Exponent(2.0));
  CHECK_THROWS(kernel_eval(disk, make_point(1.5), make_point(0.0)));
  const SpaceDescriptor half(SpaceFamily::HardyHalfPlane, 1, Exponent(2.0));
  CHECK_THROWS(kernel_eval(half, make_point(Complex(0.0, -1.0)), make_point(Complex(0.0, 1.0))));
}

TEST_CASE("single-point interpolant spot values") {
  const SpaceDescriptor disk2(SpaceFamily::HardyDisk, 1, Exponent(2.0));

  const auto constant = single_point_interpolant(disk2, make_point(0.0), 5.0);
  CHECK(constant.norm == doctest::Approx(5.0));
  CHECK(std::abs(evaluate_interpolant(constant, make_point(Complex(0.3, 0.1))) - 5.0) <
        1e-14);

  const auto f = single_point_interpolant(disk2, make_point(0.5), 1.0);
  CHECK(f.norm == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  // f(z) = ((3/4)/(1-z/2))^{2n/p} with 2n/p = 1; at z=0 this is 3/4.
  CHECK(std::abs(evaluate_interpolant(f, make_point(0.0)) - 0.75) < 1e-14);
  CHECK(std::abs(evaluate_interpolant(f, f.node) - 1.0) < 1e-12);

  const SpaceDescriptor half2(SpaceFamily::HardyHalfPlane, 1, Exponent(2.0));
  const auto g = single_point_interpolant(half2, make_point(Complex(0.0, 1.0)), 1.0);
  CHECK(g.norm == doctest::Approx(std::sqrt(4.0 * M_PI)).epsilon(1e-14));
  // f(z) = 2i/(z+i); at z=2i this is 2i/3i = 2/3.
  CHECK(std::abs(evaluate_interpolant(g, make_point(Complex(0.0, 2.0))) - 2.0 / 3.0) <
        1e-14);

  const SpaceDescriptor wdisk(SpaceFamily::WeightedBergmanDisk, 1, Exponent(2.0), 1.0);
  CHECK_THROWS(single_point_interpolant(wdisk, make_point(0.0), 1.0));
}

TEST_CASE("interpolant modulus stays bounded toward the boundary") {
  const SpaceDescriptor disk(SpaceFamily::HardyDisk, 1, Exponent(3.0));
  const auto f = single_point_interpolant(disk, make_point(Complex(0.2, 0.3)), 2.0);
  for (double r : {0.9, 0.99, 0.999, 1.0}) {
    const Complex v = evaluate_interpolant(f, make_point(std::polar(r, 1.0)));
    CHECK(std::isfinite(std::abs(v)));
    CHECK(std::abs(v) < 100.0);
  }
}

TEST_CASE("boundary quadrature spot values") {
  const Exponent p(2.7);
  CHECK(hardy_disk_boundary_norm([](Complex) { return Complex(3.0, -4.0); }, p, 64) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(hardy_disk_boundary_norm([](Complex z) { return z * z * z; }, p, 64) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(hardy_disk_boundary_norm([](Complex) { return Complex(1.0); }, p, 48));

  const SpaceDescriptor disk2(SpaceFamily::HardyDisk, 1, Exponent(2.0));
  const auto f = single_point_interpolant(disk2, make_point(0.5), 1.0);
  const double qnorm = hardy_disk_boundary_norm(
      [&](Complex z) { return evaluate_interpolant(f, make_point(z)); },
      Exponent(2.0), 4096);
  CHECK(qnorm == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("reproducing property on the circle for polynomials") {
  // f(z) = (1/2pi) int f(e^{it}) / (1 - z e^{-it}) dt for analytic f.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXcd coeffs(9);
  for (int i = 0; i < 9; ++i) coeffs[i] = Complex(gauss(rng), gauss(rng));
  auto poly = [&](Complex z) {
    Complex acc = 0.0, zp = 1.0;
    for (int i = 0; i < 9; ++i) {
      acc += coeffs[i] * zp;
      zp *= z;
    }
    return acc;
  };
  const int grid = 4096;
  for (Complex z : {Complex(0.3, 0.2), Complex(-0.6, 0.1), Complex(0.0, 0.7)}) {
    Complex acc = 0.0;
    for (int k = 0; k < grid; ++k) {
      const Complex w = std::polar(1.0, 2.0 * M_PI * k / grid);
      acc += poly(w) / (1.0 - z / w);
    }
    acc /= static_cast<double>(grid);
    CHECK(std::abs(acc - poly(z)) < 1e-10);
  }
}

TEST_CASE("star of the kernel pairs back to the kernel") {
  // g = K(z1,z1)^{2/p-1} K(.,z1) K(z1,.)^{1-2/p} satisfies
  // <K(zeta,.), g> = K(zeta, z1) under the bilinear boundary pairing.
  const double p = 2.6;
  const Complex z1(0.4, -0.2);
  const int grid = 4096;
  auto K = [](Complex w_conj_side, Complex z_analytic) {
    // Szego kernel with the first slot conjugated, boundary extension allowed.
    return 1.0 / (1.0 - z_analytic * std::conj(w_conj_side));
  };
  const Complex Kz1z1 = K(z1, z1);
  for (Complex zeta : {Complex(0.1, 0.3), Complex(-0.5, -0.4), Complex(0.7, 0.0)}) {
    Complex acc = 0.0;
    for (int k = 0; k < grid; ++k) {
      const Complex w = std::polar(1.0, 2.0 * M_PI * k / grid);
      const Complex g = std::pow(Kz1z1, 2.0 / p - 1.0) * K(w, z1) *
                        std::pow(K(z1, w), 1.0 - 2.0 / p);
      acc += K(zeta, w) * g;
    }
    acc /= static_cast<double>(grid);
    CHECK(std::abs(acc - K(zeta, z1)) < 1e-8);
  }
}

TEST_CASE("single-point norm is minimal among competing interpolants") {
  const SpaceDescriptor disk(SpaceFamily::HardyDisk, 1, Exponent(2.4));
  const Complex z0(0.3, 0.25);
  const Complex w0(1.2, -0.4);
  const auto f = single_point_interpolant(disk, make_point(z0), w0);
  std::mt19937_64 rng(33);
  std::normal_distribution<double> gauss(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    Complex a(gauss(rng), gauss(rng)), b(gauss(rng), gauss(rng));
    auto competitor = [&](Complex z) {
      return evaluate_interpolant(f, make_point(z)) + (z - z0) * (a + b * z);
    };
    const double n = hardy_disk_boundary_norm(competitor, disk.p, 1024);
    CHECK(n >= f.norm * (1.0 - 1e-9));
  }
}

TEST_CASE("quadrature norms match closed forms for other families") {
  // Bergman disk (n=1 ball): p=2, z0 interior.
  const SpaceDescriptor berg(SpaceFamily::BergmanBall, 1, Exponent(2.0));
  const auto f = single_point_interpolant(berg, make_point(Complex(0.3, 0.1)), 1.5);
  const double qb = bergman_disk_norm(
      [&](Complex z) { return evaluate_interpolant(f, make_point(z)); },
      Exponent(2.0), 64, 256);
  CHECK(qb == doctest::Approx(f.norm).epsilon(1e-10));

  // Half-plane, p=2.3.
  const SpaceDescriptor half(SpaceFamily::HardyHalfPlane, 1, Exponent(2.3));
  const auto g = single_point_interpolant(half, make_point(Complex(0.5, 1.2)), 2.0);
  const double qh = half_plane_boundary_norm(
      [&](Complex z) { return evaluate_interpolant(g, make_point(z)); },
      Exponent(2.3), 64, 12);
  CHECK(qh == doctest::Approx(g.norm).epsilon(1e-8));

  // Polydisk n=2 via the tensor boundary grid.
  const SpaceDescriptor poly(SpaceFamily::HardyPolydisk, 2, Exponent(3.0));
  const auto h = single_point_interpolant(poly, pt2(Complex(0.2, 0.1), 0.4), 1.0);
  const double qp = polydisk_boundary_norm(
      [&](const Point& z) { return evaluate_interpolant(h, z); }, Exponent(3.0), 2,
      128);
  CHECK(qp == doctest::Approx(h.norm).epsilon(1e-8));
}

TEST_CASE("Monte-Carlo ball norms agree loosely with closed forms") {
  const SpaceDescriptor hardy2(SpaceFamily::HardyBall, 2, Exponent(2.0));
  const auto f = single_point_interpolant(hardy2, pt2(0.2, Complex(0.1, 0.3)), 1.0);
  const double mc = hardy_ball_norm_mc(
      [&](const Point& z) { return evaluate_interpolant(f, z); }, Exponent(2.0), 2,
      200000, 42);
  CHECK(mc == doctest::Approx(f.norm).epsilon(1e-2));

  const SpaceDescriptor berg2(SpaceFamily::BergmanBall, 2, Exponent(4.0));
  const auto g = single_point_interpolant(berg2, pt2(0.25, 0.1), 1.0);
  const double mcb = bergman_ball_norm_mc(
      [&](const Point& z) { return evaluate_interpolant(g, z); }, Exponent(4.0), 2,
      200000, 43);
  CHECK(mcb == doctest::Approx(g.norm).epsilon(1e-2));
}
