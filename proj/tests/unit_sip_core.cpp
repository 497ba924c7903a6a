#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <minterp/sip_core.hpp>

#include <random>

using namespace minterp;

namespace {

VectorXcd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = Complex(gauss(rng), gauss(rng));
  return x;
}

MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

}  // namespace

TEST_CASE("Exponent validates and derives the conjugate") {
  CHECK_THROWS_AS(Exponent(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Exponent(0.5), std::invalid_argument);
  CHECK_THROWS_AS(Exponent(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  for (double p : {1.2, 1.5, 2.0, 3.0, 6.0}) {
    const Exponent e(p);
    CHECK(1.0 / e.p + 1.0 / e.q == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.conjugate().p == doctest::Approx(e.q));
  }
}

TEST_CASE("WeightedSample validates lengths and weights") {
  VectorXcd v(2);
  v << 1.0, 2.0;
  VectorXd w_bad(2);
  w_bad << 1.0, -1.0;
  CHECK_THROWS(WeightedSample(v, w_bad));
  VectorXd w_short(1);
  w_short << 1.0;
  CHECK_THROWS(WeightedSample(v, w_short));
  CHECK(WeightedSample::counting(v).weights.minCoeff() == 1.0);
}

TEST_CASE("lp_norm on spot inputs") {
  VectorXcd zero = VectorXcd::Zero(3);
  CHECK(lp_norm(zero, Exponent(3.0)) == 0.0);

  VectorXcd x(3);
  x << 3.0, Complex(0.0, 4.0), 0.0;
  CHECK(lp_norm(x, Exponent(2.0)) == doctest::Approx(5.0).epsilon(1e-14));

  VectorXcd ones(2);
  ones << 1.0, 1.0;
  CHECK(lp_norm(ones, Exponent(4.0)) ==
        doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("lp_norm respects weights") {
  VectorXcd x(2);
  x << 2.0, 1.0;
  VectorXd w(2);
  w << 0.5, 0.5;
  // (0.5*8 + 0.5*1)^{1/3}
  CHECK(lp_norm(x, w, Exponent(3.0)) ==
        doctest::Approx(std::cbrt(4.5)).epsilon(1e-14));
}

TEST_CASE("star_lp spot values") {
  VectorXcd zero = VectorXcd::Zero(4);
  CHECK(star_lp(zero, Exponent(1.5)).norm() == 0.0);

  VectorXcd x(3);
  x << 3.0, Complex(0.0, 4.0), 0.0;
  const VectorXcd xs = star_lp(x, Exponent(2.0));
  CHECK(std::abs(xs[0] - Complex(3.0)) < 1e-14);
  CHECK(std::abs(xs[1] - Complex(0.0, -4.0)) < 1e-14);
  CHECK(std::abs(xs[2]) == 0.0);

  VectorXcd ones(2);
  ones << 1.0, 1.0;
  const VectorXcd os = star_lp(ones, Exponent(4.0));
  CHECK(std::abs(os[0] - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(os[1] - 1.0 / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("pairing spot values and validation") {
  auto mk = [](Complex a, Complex b) {
    VectorXcd v(2);
    v << a, b;
    return WeightedSample::counting(v);
  };
  CHECK(std::abs(pairing(mk(1.0, 0.0), mk(0.0, 1.0))) == 0.0);
  CHECK(std::abs(pairing(mk(1.0, Complex(0, 1)), mk(1.0, Complex(0, 1)))) <
        1e-15);

  VectorXcd a(2), b(2);
  a << 2.0, 1.0;
  b << 1.0, 3.0;
  VectorXd w(2);
  w << 0.5, 0.5;
  CHECK(std::abs(pairing(WeightedSample(a, w), WeightedSample(b, w)) - 2.5) <
        1e-15);

  VectorXd w_other(2);
  w_other << 0.25, 0.75;
  CHECK_THROWS(pairing(WeightedSample(a, w), WeightedSample(b, w_other)));
}

TEST_CASE("sip identities") {
  VectorXcd x(3);
  x << 3.0, Complex(0.0, 4.0), 0.0;
  const auto xs = WeightedSample::counting(x);
  CHECK(std::abs(sip(xs, xs, Exponent(2.0)) - 25.0) < 1e-12);

  // sip(x, lambda*y) = conj(lambda) * sip(x, y)
  VectorXcd e1(2);
  e1 << 1.0, 0.0;
  VectorXcd ie1 = Complex(0.0, 1.0) * e1;
  CHECK(std::abs(sip(WeightedSample::counting(e1), WeightedSample::counting(ie1),
                     Exponent(3.0)) -
                 Complex(0.0, -1.0)) < 1e-14);
}

TEST_CASE("sip satisfies Cauchy-Schwarz for random pairs") {
  std::mt19937_64 rng(7);
  const Exponent e(1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = WeightedSample::counting(random_vector(rng, 5));
    const auto y = WeightedSample::counting(random_vector(rng, 5));
    const double lhs = std::norm(sip(x, y, e));
    const double rhs = std::real(sip(x, x, e)) * std::real(sip(y, y, e));
    CHECK(lhs <= rhs * (1.0 + 1e-10));
  }
}

TEST_CASE("star roundtrip, isometry, Hoelder equality, anti-homogeneity") {
  std::mt19937_64 rng(11);
  for (double pv : {1.2, 1.5, 2.0, 3.0, 6.0}) {
    const Exponent p(pv);
    const Exponent q = p.conjugate();
    for (int trial = 0; trial < 20; ++trial) {
      const VectorXcd x = random_vector(rng, 6);
      const VectorXcd xs = star_lp(x, p);

      const VectorXcd back = star_lp(xs, q);
      CHECK((back - x).norm() <= 1e-10 * x.norm());

      CHECK(lp_norm(xs, q) == doctest::Approx(lp_norm(x, p)).epsilon(1e-12));

      const Complex h = pairing(WeightedSample::counting(x),
                                WeightedSample::counting(xs));
      const double n2 = lp_norm(x, p) * lp_norm(x, p);
      CHECK(std::abs(h - n2) <= 1e-12 * n2);
      CHECK(h.real() >= 0.0);

      const Complex lambda(0.3, -1.7);
      const VectorXcd lhs = star_lp(lambda * x, p);
      const VectorXcd rhs = std::conj(lambda) * xs;
      CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
    }
  }
}

TEST_CASE("star_lp_s spot values") {
  // S = identity reduces to star_lp.
  std::mt19937_64 rng(3);
  const VectorXcd x = random_vector(rng, 4);
  const MatrixXcd id = MatrixXcd::Identity(4, 4);
  const Exponent p(3.0);
  CHECK((star_lp_s(x, id, p) - star_lp(x, p)).norm() < 1e-12);

  // p = 2: S^T conj(S) conj(x).
  const MatrixXcd S = random_matrix(rng, 4);
  const VectorXcd lhs = star_lp_s(x, S, Exponent(2.0));
  const VectorXcd rhs = S.transpose() * (S * x).conjugate();
  CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());

  // Hand example: x=(1,0), S=diag(2,1), p=4.
  MatrixXcd D = MatrixXcd::Identity(2, 2);
  D(0, 0) = 2.0;
  VectorXcd e1(2);
  e1 << 1.0, 0.0;
  const VectorXcd st = star_lp_s(e1, D, Exponent(4.0));
  CHECK(std::abs(st[0] - 4.0) < 1e-12);
  CHECK(std::abs(st[1]) < 1e-12);
  // <x, x^star> = ||Sx||_{l^4}^2 = 4.
  CHECK(std::abs((e1.transpose() * st)(0) - 4.0) < 1e-12);
}

TEST_CASE("star_lp_s roundtrip through the dual basis") {
  std::mt19937_64 rng(19);
  const Exponent p(2.6);
  const Exponent q = p.conjugate();
  for (int trial = 0; trial < 10; ++trial) {
    MatrixXcd S = random_matrix(rng, 5);
    S += 3.0 * MatrixXcd::Identity(5, 5);  // keep well-conditioned
    const VectorXcd x = random_vector(rng, 5);
    const MatrixXcd Sdual = S.transpose().inverse();
    const VectorXcd back = star_lp_s(star_lp_s(x, S, p), Sdual, q);
    CHECK((back - x).norm() <= 1e-9 * x.norm());
  }
}

TEST_CASE("star_lp_s rejects singular and ill-conditioned S") {
  MatrixXcd S = MatrixXcd::Zero(2, 2);
  S(0, 0) = 1.0;
  VectorXcd x(2);
  x << 1.0, 1.0;
  CHECK_THROWS(star_lp_s(x, S, Exponent(2.0)));
  S(1, 1) = 1e-15;
  CHECK_THROWS(star_lp_s(x, S, Exponent(2.0)));
}

TEST_CASE("sip_s reproduces the l^p_S norm") {
  std::mt19937_64 rng(23);
  MatrixXcd S = random_matrix(rng, 4) + 3.0 * MatrixXcd::Identity(4, 4);
  const VectorXcd x = random_vector(rng, 4);
  const Exponent p(1.7);
  const double n = lp_norm(S * x, p);
  CHECK(std::abs(sip_s(x, x, S, p) - n * n) <= 1e-10 * n * n);
}
