#ifndef MINTERP_SIP_CORE_HPP
#define MINTERP_SIP_CORE_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace minterp {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Conjugate exponent pair with 1 < p < infinity and 1/p + 1/q = 1.
struct Exponent {
  double p;
  double q;

  Exponent() : Exponent(2.0) {}
  explicit Exponent(double p_) : p(p_), q(p_ / (p_ - 1.0)) {
    if (!(p_ > 1.0) || !std::isfinite(p_))
      throw std::invalid_argument("Exponent: p must satisfy 1 < p < inf");
  }

  Exponent conjugate() const { return Exponent(q); }
};

/// Finitely supported function on a discrete measure space: values f(x_i)
/// together with the point masses w_i > 0.
struct WeightedSample {
  VectorXcd values;
  VectorXd weights;

  WeightedSample() = default;
  WeightedSample(VectorXcd v, VectorXd w);

  /// Unit weights (counting measure).
  static WeightedSample counting(VectorXcd v);

  Eigen::Index size() const { return values.size(); }
};

/// (sum_i w_i |x_i|^p)^{1/p}, computed with a scale factored out to avoid
/// overflow for extreme p.
double lp_norm(const WeightedSample& x, const Exponent& e);
double lp_norm(const VectorXcd& x, const VectorXd& weights, const Exponent& e);
double lp_norm(const VectorXcd& x, const Exponent& e);

/// Duality map of L^p: ||x||^{2-p} conj(x_i) |x_i|^{p-2} pointwise, with
/// 0*|0|^{p-2} = 0 and star of the zero vector equal to zero. The result
/// carries the same weights and lives in L^q.
WeightedSample star_lp(const WeightedSample& x, const Exponent& e);
VectorXcd star_lp(const VectorXcd& x, const VectorXd& weights, const Exponent& e);
VectorXcd star_lp(const VectorXcd& x, const Exponent& e);

/// Bilinear duality pairing sum_i w_i x_i y_i (no conjugation).
Complex pairing(const WeightedSample& x, const WeightedSample& y);

/// Semi-inner product [x,y] = <x, y^{star_p}>.
Complex sip(const WeightedSample& x, const WeightedSample& y, const Exponent& e);

/// Duality map of l^p_S: x^star = S^T [(Sx)^{star_p}]. Throws if S is
/// singular or the reciprocal condition estimate falls below 1e-12.
VectorXcd star_lp_s(const VectorXcd& x, const MatrixXcd& S, const Exponent& e);

/// Semi-inner product on l^p_S: [x,y] = <x, y^{star_{l^p_S}}>.
Complex sip_s(const VectorXcd& x, const VectorXcd& y, const MatrixXcd& S,
              const Exponent& e);

/// Reciprocal condition number from the extreme singular values.
double rcond_estimate(const MatrixXcd& S);

}  // namespace minterp

#endif
