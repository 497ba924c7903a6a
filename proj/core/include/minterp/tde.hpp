#ifndef MINTERP_TDE_HPP
#define MINTERP_TDE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "minterp/lp_affine.hpp"

namespace minterp {
namespace tde {

using Eigen::MatrixXd;

/// Delay estimation data: received signals x1, x2 (1-based samples stored in
/// index 0..N-1), filter half-window M, attenuation beta, exponent p, and
/// the delay search grid.
struct TdeProblem {
  VectorXd x1;
  VectorXd x2;
  int M = 0;
  double beta = 1.0;
  Exponent p;
  double d_min = 0.0;
  double d_max = 0.0;
  double d_step = 0.01;

  TdeProblem(VectorXd x1_, VectorXd x2_, int M_, double beta_, Exponent p_,
             double d_min_, double d_max_, double d_step_ = 0.01);
  int N() const { return static_cast<int>(x1.size()); }
};

struct TdeResult {
  VectorXd h_opt;          // length 2M+1, entry i <-> filter tap index i-M
  double D_opt = 0.0;
  double objective = 0.0;  // sum_n |x2[n] - beta (h * x1)[n]|^p
  int rank = 0;
  double factor_residual = 0.0;
  double certificate = 0.0;  // propagated from the sequence-space solve
};

/// Toeplitz data matrix T (rows n = M+1..N-M, columns i = -M..M, entry
/// x1[n-i]) and the target slice y_n = x2[n] over the same rows.
std::pair<MatrixXd, VectorXd> build_system(const TdeProblem& prob);

/// [T y] = S [E y_hat] with S invertible and E the row reduced echelon form.
struct RrefFactor {
  MatrixXd S;
  MatrixXd E;
  VectorXd y_hat;
  int rank = 0;
  std::vector<int> pivot_cols;
  double residual = 0.0;  // ||[T y] - S [E y_hat]||_inf
};

RrefFactor rref_factor(const MatrixXd& T, const VectorXd& y);

/// Full pipeline: factorize, minimize ||Sx||_p over x matching y_hat beyond
/// the pivot rows, recover h from E h = y_hat - x_min (free taps zeroed),
/// then locate D_opt = argmax_D sum_i h_i sinc(D - i) by a grid scan plus
/// golden-section refinement.
TdeResult estimate(const TdeProblem& prob);

/// Value of the filtering objective sum |x2[n] - beta (h * x1)[n]|^p over
/// the window rows; h has length 2M+1.
double objective_value(const TdeProblem& prob, const VectorXd& h);

/// Independent check: minimize the same objective directly over h by the
/// smooth convex descent used elsewhere. Returns (h, objective).
std::pair<VectorXd, double> direct_minimize(const TdeProblem& prob);

/// sin(pi t)/(pi t) with sinc(0) = 1.
double sinc(double t);

/// argmax_D sum_i h_i sinc(D - (i - M)) over [d_min, d_max]: grid scan at
/// d_step then golden-section to 1e-6.
double delay_search(const VectorXd& h, int M, double d_min, double d_max,
                    double d_step);

/// Synthetic two-channel experiment: source s[n] ~ U[0,1] i.i.d.,
/// x1[n] = s[n] + v1[n], x2[n] = beta s[n - D] + v2[n], with independent
/// impulsive noise v1, v2 taking values {-amp, 0, +amp} with probabilities
/// {0.01, 0.98, 0.01}. Deterministic for a fixed seed. D must be an
/// integer delay.
TdeProblem make_synthetic(int N, int D, int M, double beta, double noise_amp,
                          const Exponent& p, std::uint64_t seed);

}  // namespace tde
}  // namespace minterp

#endif
