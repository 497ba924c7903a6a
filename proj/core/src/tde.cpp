#include "minterp/tde.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace minterp {
namespace tde {

TdeProblem::TdeProblem(VectorXd x1_, VectorXd x2_, int M_, double beta_,
                       Exponent p_, double d_min_, double d_max_, double d_step_)
    : x1(std::move(x1_)), x2(std::move(x2_)), M(M_), beta(beta_), p(p_),
      d_min(d_min_), d_max(d_max_), d_step(d_step_) {
  if (x1.size() != x2.size())
    throw std::invalid_argument("TdeProblem: signal length mismatch");
  if (M < 0 || N() <= 4 * M + 1)
    throw std::invalid_argument("TdeProblem: need N > 4M + 1");
  if (beta == 0.0) throw std::invalid_argument("TdeProblem: beta must be nonzero");
  if (!(d_step > 0.0) || !(d_max > d_min))
    throw std::invalid_argument("TdeProblem: bad delay grid");
}

std::pair<MatrixXd, VectorXd> build_system(const TdeProblem& prob) {
  const int N = prob.N();
  const int M = prob.M;
  const int rows = N - 2 * M;
  const int cols = 2 * M + 1;
  MatrixXd T(rows, cols);
  VectorXd y(rows);
  // Row r stands for sample n = M+1+r (1-based), column c for tap i = c-M;
  // the entry x1[n-i] then sits at 0-based position 2M+r-c.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) T(r, c) = prob.x1[2 * M + r - c];
    y[r] = prob.x2[M + r];
  }
  return {std::move(T), std::move(y)};
}

RrefFactor rref_factor(const MatrixXd& T, const VectorXd& y) {
  const Eigen::Index rows = T.rows();
  const Eigen::Index cols = T.cols();
  if (y.size() != rows) throw std::invalid_argument("rref_factor: size mismatch");

  MatrixXd A(rows, cols + 1);
  A.leftCols(cols) = T;
  A.col(cols) = y;
  MatrixXd S = MatrixXd::Identity(rows, rows);

  const double scale = std::max(T.cwiseAbs().maxCoeff(), 1e-300);
  const double tol = 1e-11 * scale;

  RrefFactor out;
  Eigen::Index rank = 0;
  for (Eigen::Index col = 0; col < cols && rank < rows; ++col) {
    Eigen::Index piv_row = rank;
    double piv = 0.0;
    for (Eigen::Index i = rank; i < rows; ++i)
      if (std::abs(A(i, col)) > piv) {
        piv = std::abs(A(i, col));
        piv_row = i;
      }
    if (piv <= tol) continue;
    if (piv_row != rank) {
      A.row(piv_row).swap(A.row(rank));
      S.col(piv_row).swap(S.col(rank));  // inverse of the row swap
    }
    const double d = A(rank, col);
    A.row(rank) /= d;
    S.col(rank) *= d;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const double m = A(i, col);
      if (m == 0.0) continue;
      A.row(i) -= m * A.row(rank);
      S.col(rank) += m * S.col(i);
    }
    out.pivot_cols.push_back(static_cast<int>(col));
    ++rank;
  }

  out.S = std::move(S);
  out.E = A.leftCols(cols);
  out.y_hat = A.col(cols);
  out.rank = static_cast<int>(rank);

  MatrixXd recon(rows, cols + 1);
  recon.leftCols(cols) = out.S * out.E;
  recon.col(cols) = out.S * out.y_hat;
  MatrixXd orig(rows, cols + 1);
  orig.leftCols(cols) = T;
  orig.col(cols) = y;
  out.residual = (recon - orig).cwiseAbs().maxCoeff();
  return out;
}

double sinc(double t) {
  if (t == 0.0) return 1.0;
  return std::sin(M_PI * t) / (M_PI * t);
}

double delay_search(const VectorXd& h, int M, double d_min, double d_max,
                    double d_step) {
  auto score = [&](double D) {
    double acc = 0.0;
    for (Eigen::Index c = 0; c < h.size(); ++c)
      acc += h[c] * sinc(D - (static_cast<double>(c) - M));
    return acc;
  };
  double best_d = d_min;
  double best = score(d_min);
  for (double D = d_min; D <= d_max + 1e-12; D += d_step) {
    const double v = score(D);
    if (v > best) {
      best = v;
      best_d = D;
    }
  }
  // Golden-section refinement around the grid argmax.
  double a = std::max(d_min, best_d - d_step);
  double b = std::min(d_max, best_d + d_step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - gr * (b - a);
  double c2 = a + gr * (b - a);
  double f1 = score(c1), f2 = score(c2);
  while (b - a > 1e-6) {
    if (f1 >= f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = score(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = score(c2);
    }
  }
  return 0.5 * (a + b);
}

double objective_value(const TdeProblem& prob, const VectorXd& h) {
  const auto [T, y] = build_system(prob);
  const VectorXd r = y - prob.beta * (T * h);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    acc += std::pow(std::abs(r[i]), prob.p.p);
  return acc;
}

TdeResult estimate(const TdeProblem& prob) {
  const auto [T, y] = build_system(prob);
  const RrefFactor F = rref_factor(T, y);
  const Eigen::Index rows = T.rows();
  const int r = F.rank;

  TdeResult out;
  out.rank = r;
  out.factor_residual = F.residual;

  VectorXd x_min = VectorXd::Zero(rows);
  if (r < rows) {
    std::vector<int> J;
    VectorXcd s(rows - r);
    for (Eigen::Index j = r; j < rows; ++j) {
      J.push_back(static_cast<int>(j));
      s[j - r] = F.y_hat[j];
    }
    lps::LpSProblem lp(F.S.cast<Complex>(), J, s, prob.p);
    lps::LpSolveOptions opts;
    opts.p_step_small = 0.02;  // exponents as low as 1.01 need fine steps
    const lps::LpSReport rep = lps::solve(lp, opts);
    x_min = rep.x_min.real();
    out.certificate = rep.certificate;
  }
  // else: E h spans all of R^rows, the fit is exact and x_min = 0.

  // Recover beta*h from E h = y_hat - x_min; free taps stay zero, pivot rows
  // of the echelon form read the taps off directly.
  const VectorXd rhs = F.y_hat - x_min;
  VectorXd h = VectorXd::Zero(T.cols());
  for (int i = 0; i < r; ++i) h[F.pivot_cols[i]] = rhs[i];
  h /= prob.beta;

  out.h_opt = h;
  out.D_opt = delay_search(h, prob.M, prob.d_min, prob.d_max, prob.d_step);
  out.objective = objective_value(prob, h);
  return out;
}

std::pair<VectorXd, double> direct_minimize(const TdeProblem& prob) {
  const auto [T, y] = build_system(prob);
  const double p = prob.p.p;
  const double beta = prob.beta;

  auto objective = [&](const VectorXd& h, VectorXd* grad) {
    const VectorXd u = y - beta * (T * h);
    double val = 0.0;
    VectorXd wu(u.size());
    for (Eigen::Index g = 0; g < u.size(); ++g) {
      const double a = std::abs(u[g]);
      val += std::pow(a, p);
      wu[g] = (a < 1e-300) ? 0.0 : std::pow(a, p - 2.0) * u[g];
    }
    if (grad) *grad = -beta * p * (T.transpose() * wu);
    return val;
  };

  VectorXd h = VectorXd::Zero(T.cols());
  VectorXd g;
  double fval = objective(h, &g);
  double alpha = 1.0 / std::max(1.0, g.norm());
  for (long it = 0; it < 200000; ++it) {
    if (g.norm() < 1e-12 * std::max(1.0, fval)) break;
    double a = alpha;
    VectorXd h_new;
    double f_new = 0.0;
    bool ok = false;
    for (int bt = 0; bt < 60; ++bt) {
      h_new = h - a * g;
      f_new = objective(h_new, nullptr);
      if (f_new < fval) {
        ok = true;
        break;
      }
      a *= 0.5;
    }
    if (!ok) break;
    VectorXd g_new;
    objective(h_new, &g_new);
    const VectorXd dh = h_new - h;
    const VectorXd dg = g_new - g;
    alpha = (dg.squaredNorm() > 0.0) ? std::abs(dh.dot(dg)) / dg.squaredNorm() : a;
    h = h_new;
    g = g_new;
    fval = f_new;
  }

  // Newton polish with a finite-difference Hessian of the gradient.
  for (int polish = 0; polish < 40; ++polish) {
    fval = objective(h, &g);
    if (g.norm() < 1e-13 * std::max(1.0, fval)) break;
    const Eigen::Index m = h.size();
    MatrixXd H(m, m);
    const double hstep = 1e-6 * std::max(1.0, h.norm());
    for (Eigen::Index c = 0; c < m; ++c) {
      VectorXd hp = h;
      hp[c] += hstep;
      VectorXd gp;
      objective(hp, &gp);
      H.col(c) = (gp - g) / hstep;
    }
    H = 0.5 * (H + H.transpose()).eval();
    H.diagonal().array() += 1e-12 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
    const VectorXd step = H.ldlt().solve(-g);
    double lambda = 1.0;
    bool ok = false;
    for (int bt = 0; bt < 40; ++bt) {
      const VectorXd h_new = h + lambda * step;
      const double f_new = objective(h_new, nullptr);
      if (f_new <= fval) {
        h = h_new;
        fval = f_new;
        ok = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!ok) break;
  }
  return {h, objective(h, nullptr)};
}

TdeProblem make_synthetic(int N, int D, int M, double beta, double noise_amp,
                          const Exponent& p, std::uint64_t seed) {
  if (N <= 4 * M + 1) throw std::invalid_argument("make_synthetic: N too small");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto impulse = [&]() {
    const double u = unif(rng);
    return (u < 0.01) ? -noise_amp : (u < 0.02 ? noise_amp : 0.0);
  };

  VectorXd s(N);
  for (int n = 0; n < N; ++n) s[n] = unif(rng);

  VectorXd x1(N), x2(N);
  for (int n = 0; n < N; ++n) x1[n] = s[n] + impulse();
  for (int n = 0; n < N; ++n) {
    const int idx = n - D;
    const double clean = (idx >= 0 && idx < N) ? beta * s[idx] : 0.0;
    x2[n] = clean + impulse();
  }
  return TdeProblem(x1, x2, M, beta, p, -static_cast<double>(M),
                    static_cast<double>(M), 0.01);
}

}  // namespace tde
}  // namespace minterp
