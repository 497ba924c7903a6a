#include "minterp/sip_core.hpp"

#include <cmath>

namespace minterp {

namespace {
// Below this magnitude an entry is treated as exactly zero inside
// |x_i|^{p-2}; avoids overflow for p < 2.
constexpr double kZeroCutoff = 1e-300;
}  // namespace

WeightedSample::WeightedSample(VectorXcd v, VectorXd w)
    : values(std::move(v)), weights(std::move(w)) {
  if (values.size() != weights.size() || values.size() < 1)
    throw std::invalid_argument("WeightedSample: values/weights length mismatch");
  if ((weights.array() <= 0.0).any())
    throw std::invalid_argument("WeightedSample: weights must be positive");
}

WeightedSample WeightedSample::counting(VectorXcd v) {
  VectorXd w = VectorXd::Ones(v.size());
  return WeightedSample(std::move(v), std::move(w));
}

double lp_norm(const VectorXcd& x, const VectorXd& weights, const Exponent& e) {
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale < kZeroCutoff) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    acc += weights[i] * std::pow(std::abs(x[i]) / scale, e.p);
  return scale * std::pow(acc, 1.0 / e.p);
}

double lp_norm(const WeightedSample& x, const Exponent& e) {
  return lp_norm(x.values, x.weights, e);
}

double lp_norm(const VectorXcd& x, const Exponent& e) {
  return lp_norm(x, VectorXd::Ones(x.size()), e);
}

VectorXcd star_lp(const VectorXcd& x, const VectorXd& weights, const Exponent& e) {
  const double nrm = lp_norm(x, weights, e);
  VectorXcd out = VectorXcd::Zero(x.size());
  if (nrm == 0.0) return out;
  // star(x)_i = ||x||^{2-p} conj(x_i) |x_i|^{p-2}
  //           = ||x|| * conj(u_i) |u_i|^{p-2}  with u = x/||x||,
  // which keeps every factor in [0,1] for p >= 2 and bounded for p < 2.
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Complex u = x[i] / nrm;
    const double au = std::abs(u);
    if (au < kZeroCutoff) continue;
    out[i] = nrm * std::conj(u) * std::pow(au, e.p - 2.0);
  }
  return out;
}

WeightedSample star_lp(const WeightedSample& x, const Exponent& e) {
  WeightedSample out;
  out.values = star_lp(x.values, x.weights, e);
  out.weights = x.weights;
  return out;
}

VectorXcd star_lp(const VectorXcd& x, const Exponent& e) {
  return star_lp(x, VectorXd::Ones(x.size()), e);
}

Complex pairing(const WeightedSample& x, const WeightedSample& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pairing: length mismatch");
  if ((x.weights - y.weights).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("pairing: weight mismatch");
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    acc += x.weights[i] * x.values[i] * y.values[i];
  return acc;
}

Complex sip(const WeightedSample& x, const WeightedSample& y, const Exponent& e) {
  return pairing(x, star_lp(y, e));
}

double rcond_estimate(const MatrixXcd& S) {
  Eigen::JacobiSVD<MatrixXcd> svd(S);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0.0;
  return sv[sv.size() - 1] / sv[0];
}

VectorXcd star_lp_s(const VectorXcd& x, const MatrixXcd& S, const Exponent& e) {
  if (S.rows() != S.cols() || S.rows() != x.size())
    throw std::invalid_argument("star_lp_s: dimension mismatch");
  if (rcond_estimate(S) < 1e-12)
    throw std::invalid_argument("star_lp_s: S singular or ill-conditioned");
  return S.transpose() * star_lp(VectorXcd(S * x), e);
}

Complex sip_s(const VectorXcd& x, const VectorXcd& y, const MatrixXcd& S,
              const Exponent& e) {
  const VectorXcd ys = star_lp_s(y, S, e);
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += x[i] * ys[i];
  return acc;
}

}  // namespace minterp
