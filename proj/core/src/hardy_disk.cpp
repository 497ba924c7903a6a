#include "minterp/hardy_disk.hpp"

#include <algorithm>
#include <cmath>

#include "minterp/kernels.hpp"

namespace minterp {
namespace hardy {

namespace {

constexpr double kNearBoundaryBand = 1e-3;

Complex szego(Complex z, Complex w) { return 1.0 / (1.0 - z * std::conj(w)); }

}  // namespace

HardyProblem::HardyProblem(VectorXcd z, VectorXcd s, Exponent p_)
    : nodes(std::move(z)), values(std::move(s)), p(p_) {
  if (nodes.size() != values.size() || nodes.size() < 1)
    throw std::invalid_argument("HardyProblem: nodes/values length mismatch");
  for (Eigen::Index i = 0; i < nodes.size(); ++i) {
    if (!(std::abs(nodes[i]) < 1.0))
      throw std::invalid_argument("HardyProblem: nodes must lie in the open disk");
    for (Eigen::Index j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j])
        throw std::invalid_argument("HardyProblem: nodes must be distinct");
  }
}

Complex gamma_eval(const VectorXcd& d, const VectorXcd& nodes, Complex z) {
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const Complex den = 1.0 - std::conj(nodes[i]) * z;
    if (std::abs(den) < 1e-14)
      throw std::invalid_argument("gamma_eval: evaluation at a pole");
    acc += d[i] / den;
  }
  return acc;
}

VectorXcd gamma_numerator(const VectorXcd& d, const VectorXcd& nodes) {
  const Eigen::Index k = d.size();
  VectorXcd acc = VectorXcd::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    // d_i * prod_{j != i} (1 - conj(z_j) z)
    VectorXcd poly = VectorXcd::Zero(k);
    poly[0] = d[i];
    Eigen::Index deg = 0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j == i) continue;
      const Complex a = -std::conj(nodes[j]);
      for (Eigen::Index m = deg + 1; m >= 1; --m) poly[m] = poly[m] + a * poly[m - 1];
      ++deg;
    }
    acc += poly;
  }
  return acc;
}

std::vector<Complex> polynomial_roots(const VectorXcd& coeffs) {
  // Trim leading (highest-order) coefficients that are numerically zero.
  const double scale = coeffs.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw std::invalid_argument("polynomial_roots: zero polynomial");
  Eigen::Index deg = coeffs.size() - 1;
  while (deg > 0 && std::abs(coeffs[deg]) < 1e-13 * scale) --deg;
  if (deg == 0) return {};

  VectorXcd monic(deg + 1);
  for (Eigen::Index m = 0; m <= deg; ++m) monic[m] = coeffs[m] / coeffs[deg];

  auto eval = [&](Complex z) {
    Complex v = monic[deg];
    for (Eigen::Index m = deg - 1; m >= 0; --m) v = v * z + monic[m];
    return v;
  };

  // Durand-Kerner simultaneous iteration.
  std::vector<Complex> r(deg);
  const Complex seed(0.4, 0.9);
  Complex pw = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) {
    pw *= seed;
    r[i] = pw;
  }
  for (int it = 0; it < 500; ++it) {
    double move = 0.0;
    for (Eigen::Index i = 0; i < deg; ++i) {
      Complex den = 1.0;
      for (Eigen::Index j = 0; j < deg; ++j)
        if (j != i) den *= r[i] - r[j];
      const Complex delta = eval(r[i]) / den;
      r[i] -= delta;
      move = std::max(move, std::abs(delta));
    }
    if (move < 1e-13) return r;
  }
  // Accept if residuals are small even without step convergence.
  for (const Complex& root : r)
    if (std::abs(eval(root)) > 1e-8)
      throw std::runtime_error("polynomial_roots: Durand-Kerner did not converge");
  return r;
}

std::vector<Complex> gamma_zeros_in_disk(const VectorXcd& d, const VectorXcd& nodes) {
  if (d.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("gamma_zeros_in_disk: gamma identically zero");
  const VectorXcd num = gamma_numerator(d, nodes);
  std::vector<Complex> out;
  for (const Complex& root : polynomial_roots(num))
    if (std::abs(root) < 1.0) out.push_back(root);
  return out;
}

Complex blaschke_eval(const std::vector<Complex>& zeros, Complex z) {
  Complex acc = 1.0;
  for (const Complex& a : zeros) acc *= (z - a) / (1.0 - std::conj(a) * z);
  return acc;
}

namespace {

struct BranchTracker {
  const VectorXcd& d;
  const VectorXcd& nodes;
  const std::vector<Complex>& zeros;
  long evals = 0;

  Complex h(Complex z) const {
    return gamma_eval(d, nodes, z) / blaschke_eval(zeros, z);
  }

  // Continue log h from (za, log_a) to zb along the straight segment.
  Complex continue_log(Complex za, Complex log_a, Complex zb, int depth = 0) {
    if (++evals > 200000)
      throw std::runtime_error("branch tracking failed: step budget exhausted");
    const Complex hb = h(zb);
    if (hb == Complex(0.0)) throw std::runtime_error("branch tracking hit a zero");
    const Complex step = std::log(hb * std::exp(-log_a));
    if (std::abs(step.imag()) < 0.5 * M_PI) return log_a + step;
    if (depth >= 48)
      throw std::runtime_error(
          "branch tracking failed: argument jump persists after maximal refinement");
    const Complex zm = 0.5 * (za + zb);
    const Complex lm = continue_log(za, log_a, zm, depth + 1);
    return continue_log(zm, lm, zb, depth + 1);
  }
};

Complex candidate_eval_impl(const VectorXcd& d, const VectorXcd& nodes,
                            const std::vector<Complex>& zeros, const Exponent& p,
                            Complex z) {
  const double expo = 2.0 / p.p;
  if (std::abs(expo - 1.0) < 1e-15) return gamma_eval(d, nodes, z);  // p = 2
  BranchTracker bt{d, nodes, zeros};
  const Complex log0 = std::log(bt.h(0.0));
  const Complex logz = (z == Complex(0.0)) ? log0 : bt.continue_log(0.0, log0, z);
  return blaschke_eval(zeros, z) * std::exp(expo * logz);
}

}  // namespace

Complex candidate_eval(const RationalPowerFunction& rp, Complex z) {
  return candidate_eval_impl(rp.d, rp.nodes, rp.blaschke_zeros, rp.p, z);
}

VectorXcd boundary_values(const RationalPowerFunction& rp, int grid_size) {
  const double expo = 2.0 / rp.p.p;
  VectorXcd out(grid_size);
  if (std::abs(expo - 1.0) < 1e-15) {
    for (int k = 0; k < grid_size; ++k)
      out[k] = gamma_eval(rp.d, rp.nodes, std::polar(1.0, 2.0 * M_PI * k / grid_size));
    return out;
  }
  BranchTracker bt{rp.d, rp.nodes, rp.blaschke_zeros};
  const Complex log0 = std::log(bt.h(0.0));
  // Radial continuation to t = 0, then march around the circle. Adjacent
  // grid points are joined by segments; refinement handles fast phases.
  Complex L = bt.continue_log(0.0, log0, 1.0);
  Complex zprev = 1.0;
  for (int k = 0; k < grid_size; ++k) {
    const Complex zk = std::polar(1.0, 2.0 * M_PI * k / grid_size);
    if (k > 0) L = bt.continue_log(zprev, L, zk);
    out[k] = blaschke_eval(rp.blaschke_zeros, zk) * std::exp(expo * L);
    zprev = zk;
  }
  return out;
}

double hardy_norm(const RationalPowerFunction& rp, int grid_size) {
  double acc = 0.0;
  for (int k = 0; k < grid_size; ++k) {
    const Complex z = std::polar(1.0, 2.0 * M_PI * k / grid_size);
    const double g = std::abs(gamma_eval(rp.d, rp.nodes, z));
    acc += g * g;  // |f|^p = |gamma|^2 on the circle
  }
  return std::pow(acc / grid_size, 1.0 / rp.p.p);
}

double orthogonality_certificate(const RationalPowerFunction& rp, int grid_size,
                                 int monomials) {
  const VectorXcd f = boundary_values(rp, grid_size);
  const Exponent& p = rp.p;
  double fnorm_p = 0.0;
  for (int k = 0; k < grid_size; ++k) fnorm_p += std::pow(std::abs(f[k]), p.p);
  fnorm_p /= grid_size;
  const double fnorm = std::pow(fnorm_p, 1.0 / p.p);
  if (fnorm == 0.0) return 0.0;

  // f^star on the grid: ||f||^{2-p} conj(f) |f|^{p-2}.
  VectorXcd fstar(grid_size);
  for (int k = 0; k < grid_size; ++k) {
    const double a = std::abs(f[k]);
    fstar[k] = (a < 1e-300)
                   ? Complex(0.0)
                   : std::pow(fnorm, 2.0 - p.p) * std::conj(f[k]) * std::pow(a, p.p - 2.0);
  }

  double worst = 0.0;
  const Eigen::Index kn = rp.nodes.size();
  for (int m = 0; m < monomials; ++m) {
    Complex acc = 0.0;
    double hnorm_p = 0.0;
    for (int k = 0; k < grid_size; ++k) {
      const Complex z = std::polar(1.0, 2.0 * M_PI * k / grid_size);
      Complex hv = 1.0;
      for (Eigen::Index j = 0; j < kn; ++j) hv *= z - rp.nodes[j];
      hv *= std::pow(z, static_cast<double>(m));
      acc += hv * fstar[k];
      hnorm_p += std::pow(std::abs(hv), p.p);
    }
    acc /= grid_size;
    const double hnorm = std::pow(hnorm_p / grid_size, 1.0 / p.p);
    worst = std::max(worst, std::abs(acc) / (hnorm * fnorm));
  }
  return worst;
}

namespace {

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return 1e30;
  auto one_sided = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    double worst = 0.0;
    for (const Complex& xi : x) {
      double best = 1e300;
      for (const Complex& yi : y) best = std::min(best, std::abs(xi - yi));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

VectorXd to_real(const VectorXcd& v) {
  VectorXd out(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  return out;
}

VectorXcd to_complex(const VectorXd& v) {
  VectorXcd out(v.size() / 2);
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = Complex(v[2 * i], v[2 * i + 1]);
  return out;
}

// Interpolation residuals at the nodes for fixed Blaschke zero set.
VectorXd residual_map(const VectorXcd& d, const HardyProblem& prob,
                      const std::vector<Complex>& zeros, const Exponent& p) {
  VectorXcd r(prob.nodes.size());
  for (Eigen::Index j = 0; j < prob.nodes.size(); ++j)
    r[j] = candidate_eval_impl(d, prob.nodes, zeros, p, prob.nodes[j]) - prob.values[j];
  return to_real(r);
}

// Damped Newton with finite-difference Jacobian; returns iterations used.
int newton_solve(VectorXcd& d, const HardyProblem& prob,
                 const std::vector<Complex>& zeros, const Exponent& p,
                 const SolveOptions& opts) {
  VectorXd x = to_real(d);
  VectorXd F = residual_map(to_complex(x), prob, zeros, p);
  int iters = 0;
  for (; iters < opts.max_newton; ++iters) {
    if (F.cwiseAbs().maxCoeff() < opts.tol) break;
    const Eigen::Index m = x.size();
    Eigen::MatrixXd J(m, m);
    for (Eigen::Index c = 0; c < m; ++c) {
      VectorXd xp = x;
      xp[c] += opts.fd_step;
      J.col(c) = (residual_map(to_complex(xp), prob, zeros, p) - F) / opts.fd_step;
    }
    const VectorXd step = J.colPivHouseholderQr().solve(-F);
    double lambda = 1.0;
    bool accepted = false;
    const double f0 = F.norm();
    for (int half = 0; half < 40; ++half) {
      const VectorXd xn = x + lambda * step;
      VectorXd Fn;
      try {
        Fn = residual_map(to_complex(xn), prob, zeros, p);
      } catch (const std::runtime_error&) {
        lambda *= 0.5;
        continue;
      }
      if (Fn.norm() < (1.0 - 1e-4 * lambda) * f0 || Fn.cwiseAbs().maxCoeff() < opts.tol) {
        x = xn;
        F = Fn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error("hardy solve: Newton line search stalled");
  }
  if (F.cwiseAbs().maxCoeff() >= opts.tol)
    throw std::runtime_error("hardy solve: Newton did not converge");
  d = to_complex(x);
  return iters;
}

// Fixed-point iteration over the Blaschke zero set at one value of p.
int solve_at_p(VectorXcd& d, std::vector<Complex>& zeros, const HardyProblem& prob,
               const Exponent& p, const SolveOptions& opts) {
  int total = 0;
  for (int outer = 0; outer < 25; ++outer) {
    total += newton_solve(d, prob, zeros, p, opts);
    std::vector<Complex> fresh = gamma_zeros_in_disk(d, prob.nodes);
    const double dist = hausdorff(zeros, fresh);
    zeros = std::move(fresh);
    if (dist < 1e-10) return total;
  }
  throw std::runtime_error("hardy solve: Blaschke zero set did not stabilize");
}

}  // namespace

SolverReport solve(const HardyProblem& problem, const SolveOptions& opts) {
  const Eigen::Index k = problem.nodes.size();
  const double p_target = problem.p.p;
  SolverReport rep;

  if (problem.values.cwiseAbs().maxCoeff() == 0.0) {
    rep.solution = RationalPowerFunction{problem.nodes, VectorXcd::Zero(k), {}, problem.p};
    rep.residuals = VectorXd::Zero(k);
    return rep;
  }
  if (p_target < 1.3 || p_target > 4.0)
    rep.warnings.push_back("p outside guarded range [1.3, 4.0]; results may be unreliable");

  // p = 2 anchor: linear Szego Gram system (f = gamma there).
  double p_cur = 2.0;
  VectorXcd d;
  if (opts.warm_start) {
    p_cur = opts.warm_start->first;
    d = opts.warm_start->second;
  } else {
    MatrixXcd G(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < k; ++i)
        G(j, i) = szego(problem.nodes[j], problem.nodes[i]);
    d = G.colPivHouseholderQr().solve(problem.values);
  }
  std::vector<Complex> zeros = gamma_zeros_in_disk(d, problem.nodes);

  int iterations = 0;
  while (true) {
    const double remaining = p_target - p_cur;
    if (std::abs(remaining) < 1e-14) break;
    const double step = std::clamp(remaining, -opts.p_step, opts.p_step);
    p_cur += step;
    try {
      iterations += solve_at_p(d, zeros, problem, Exponent(p_cur), opts);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(std::string(e.what()) + " (last p reached: " +
                               std::to_string(p_cur - step) + ")");
    }
  }
  if (p_cur == 2.0 && !opts.warm_start) {
    // target was exactly 2; polish once so the report is populated uniformly
    iterations += solve_at_p(d, zeros, problem, problem.p, opts);
  }

  int grid = opts.grid;
  for (const Complex& root : polynomial_roots(gamma_numerator(d, problem.nodes))) {
    if (std::abs(std::abs(root) - 1.0) <= kNearBoundaryBand) {
      rep.warnings.push_back("Blaschke zero within 1e-3 of the unit circle; refining quadrature");
      grid *= 4;
      break;
    }
  }

  rep.solution = RationalPowerFunction{problem.nodes, d, zeros, problem.p};
  rep.iterations = iterations;
  rep.norm = hardy_norm(rep.solution, grid);
  rep.residuals.resize(k);
  for (Eigen::Index j = 0; j < k; ++j)
    rep.residuals[j] =
        std::abs(candidate_eval(rep.solution, problem.nodes[j]) - problem.values[j]);
  if (opts.compute_certificate) {
    rep.certificate =
        orthogonality_certificate(rep.solution, grid, opts.certificate_monomials);
    if (rep.certificate > 1e-6)
      throw std::runtime_error("hardy solve: orthogonality certification failed");
  }
  return rep;
}

OracleResult polynomial_min_norm(const VectorXcd& sample_points,
                                 const VectorXd& sample_weights,
                                 const VectorXcd& nodes, const VectorXcd& values,
                                 const Exponent& p, int degree) {
  const Eigen::Index G = sample_points.size();
  const Eigen::Index k = nodes.size();
  const Eigen::Index D = degree + 1;
  if (degree < k) throw std::invalid_argument("polynomial_min_norm: degree < #constraints");

  MatrixXcd E(G, D);
  for (Eigen::Index g = 0; g < G; ++g) {
    Complex pw = 1.0;
    for (Eigen::Index m = 0; m < D; ++m) {
      E(g, m) = pw;
      pw *= sample_points[g];
    }
  }
  MatrixXcd V(k, D);
  for (Eigen::Index j = 0; j < k; ++j) {
    Complex pw = 1.0;
    for (Eigen::Index m = 0; m < D; ++m) {
      V(j, m) = pw;
      pw *= nodes[j];
    }
  }
  // Particular solution and nullspace of the constraints.
  const VectorXcd c0 = V.completeOrthogonalDecomposition().solve(values);
  Eigen::JacobiSVD<MatrixXcd> svd(V, Eigen::ComputeFullV);
  const MatrixXcd N = svd.matrixV().rightCols(D - k);
  const Eigen::Index m = N.cols();

  auto objective = [&](const VectorXcd& t, VectorXcd* grad) {
    const VectorXcd c = c0 + N * t;
    const VectorXcd P = E * c;
    double val = 0.0;
    VectorXcd wP(G);
    for (Eigen::Index g = 0; g < G; ++g) {
      const double a = std::abs(P[g]);
      val += sample_weights[g] * std::pow(a, p.p);
      wP[g] = (a < 1e-300) ? Complex(0.0)
                           : sample_weights[g] * std::pow(a, p.p - 2.0) * P[g];
    }
    if (grad) *grad = p.p * (N.adjoint() * (E.adjoint() * wP));
    return val;
  };

  auto real_dot = [](const VectorXcd& a, const VectorXcd& b) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return acc;
  };

  VectorXcd t = VectorXcd::Zero(m);
  VectorXcd g;
  double fval = objective(t, &g);
  int iters = 0;

  // Phase 1: gradient descent with Barzilai-Borwein steps and backtracking.
  double alpha = 1.0 / std::max(1.0, g.norm());
  for (; iters < 50000; ++iters) {
    if (g.norm() < 1e-10 * std::max(1.0, fval)) break;
    VectorXcd t_new;
    double f_new = 0.0;
    double a = alpha;
    bool ok = false;
    for (int bt = 0; bt < 60; ++bt) {
      t_new = t - a * g;
      f_new = objective(t_new, nullptr);
      if (f_new < fval) {
        ok = true;
        break;
      }
      a *= 0.5;
    }
    if (!ok) break;  // at numerical floor; hand over to Newton polish
    VectorXcd g_new;
    objective(t_new, &g_new);
    const VectorXcd dt = t_new - t;
    const VectorXcd dg = g_new - g;
    const double dgdg = real_dot(dg, dg);
    alpha = (dgdg > 0.0) ? std::abs(real_dot(dt, dg)) / dgdg : a;
    t = t_new;
    g = g_new;
    fval = f_new;
    if (iters > 50 && dt.norm() < 1e-14 * std::max(1.0, t.norm())) break;
  }

  // Phase 2: Newton polish with a finite-difference Hessian of the gradient.
  const Eigen::Index mr = 2 * m;
  if (mr > 0) {
    for (int polish = 0; polish < 30; ++polish) {
      objective(t, &g);
      if (g.norm() < 1e-12 * std::max(1.0, fval)) break;
      Eigen::MatrixXd H(mr, mr);
      const double hstep = 1e-6 * std::max(1.0, t.norm());
      VectorXd gr = to_real(g);
      for (Eigen::Index c = 0; c < mr; ++c) {
        VectorXd tr = to_real(t);
        tr[c] += hstep;
        VectorXcd gp;
        objective(to_complex(tr), &gp);
        H.col(c) = (to_real(gp) - gr) / hstep;
      }
      H = 0.5 * (H + H.transpose()).eval();
      H.diagonal().array() += 1e-12 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
      const VectorXd step = H.ldlt().solve(-gr);
      double lambda = 1.0;
      bool ok = false;
      for (int bt = 0; bt < 40; ++bt) {
        const VectorXcd t_new = t + lambda * to_complex(step);
        const double f_new = objective(t_new, nullptr);
        if (f_new <= fval) {
          t = t_new;
          fval = f_new;
          ok = true;
          break;
        }
        lambda *= 0.5;
      }
      ++iters;
      if (!ok) break;
    }
  }

  OracleResult res;
  res.norm = std::pow(fval, 1.0 / p.p);
  res.coeffs = c0 + N * t;
  res.iterations = iters;
  return res;
}

OracleResult truncated_oracle(const HardyProblem& problem, int degree, int grid) {
  if (grid < 8 * degree)
    throw std::invalid_argument("truncated_oracle: grid must be >= 8 * degree");
  VectorXcd pts(grid);
  for (int k = 0; k < grid; ++k) pts[k] = std::polar(1.0, 2.0 * M_PI * k / grid);
  const VectorXd w = VectorXd::Constant(grid, 1.0 / grid);
  return polynomial_min_norm(pts, w, problem.nodes, problem.values, problem.p, degree);
}

}  // namespace hardy
}  // namespace minterp
