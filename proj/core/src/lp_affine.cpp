#include "minterp/lp_affine.hpp"

#include <algorithm>
#include <cmath>

namespace minterp {
namespace lps {

LpSProblem::LpSProblem(MatrixXcd S_, std::vector<int> J_, VectorXcd s_, Exponent p_)
    : S(std::move(S_)), J(std::move(J_)), s(std::move(s_)), p(p_) {
  if (S.rows() != S.cols() || S.rows() < 1)
    throw std::invalid_argument("LpSProblem: S must be square");
  if (J.empty() || static_cast<Eigen::Index>(J.size()) > S.rows())
    throw std::invalid_argument("LpSProblem: need 1 <= |J| <= n");
  if (static_cast<Eigen::Index>(J.size()) != s.size())
    throw std::invalid_argument("LpSProblem: J/s length mismatch");
  for (size_t i = 0; i < J.size(); ++i) {
    if (J[i] < 0 || J[i] >= S.rows())
      throw std::invalid_argument("LpSProblem: index out of range");
    if (i > 0 && J[i] <= J[i - 1])
      throw std::invalid_argument("LpSProblem: J must be strictly increasing");
  }
  // LU-based reciprocal condition estimate; the SVD variant is prohibitive
  // for the large Toeplitz-factor systems this type also carries.
  if (Eigen::PartialPivLU<MatrixXcd>(S).rcond() < 1e-12)
    throw std::invalid_argument("LpSProblem: S singular or ill-conditioned");
}

double lp_s_norm(const VectorXcd& x, const MatrixXcd& S, const Exponent& p) {
  return lp_norm(VectorXcd(S * x), p);
}

namespace {

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

struct Context {
  const LpSProblem& prob;
  std::vector<int> free_idx;
  // The LU factorizations are only needed on the representer path; computed
  // on first use so the complement path scales to large systems.
  std::optional<Eigen::PartialPivLU<MatrixXcd>> luS_;
  std::optional<Eigen::PartialPivLU<MatrixXcd>> luST_;

  explicit Context(const LpSProblem& p_) : prob(p_) {
    std::vector<bool> constrained(p_.n(), false);
    for (int j : p_.J) constrained[j] = true;
    for (Eigen::Index i = 0; i < p_.n(); ++i)
      if (!constrained[i]) free_idx.push_back(static_cast<int>(i));
  }

  const Eigen::PartialPivLU<MatrixXcd>& luS() {
    if (!luS_) luS_.emplace(prob.S);
    return *luS_;
  }
  const Eigen::PartialPivLU<MatrixXcd>& luST() {
    if (!luST_) luST_.emplace(prob.S.transpose());
    return *luST_;
  }

  VectorXcd representer(const VectorXcd& c, const Exponent& p) {
    VectorXcd rhs = VectorXcd::Zero(prob.n());
    for (Eigen::Index j = 0; j < prob.k(); ++j) rhs[prob.J[j]] = c[j];
    return luS().solve(star_lp(VectorXcd(luST().solve(rhs)), p.conjugate()));
  }

  VectorXcd star_of(const VectorXcd& x, const Exponent& p) const {
    return prob.S.transpose() * star_lp(VectorXcd(prob.S * x), p);
  }

  VectorXcd assemble(const VectorXcd& t) const {
    VectorXcd x = VectorXcd::Zero(prob.n());
    for (Eigen::Index j = 0; j < prob.k(); ++j) x[prob.J[j]] = prob.s[j];
    for (size_t i = 0; i < free_idx.size(); ++i) x[free_idx[i]] = t[i];
    return x;
  }

  // p = 2 anchor: least-norm solution of the linear constraints under ||S.||_2,
  // computed on whichever side of the split is smaller.
  VectorXcd p2_solution() {
    const Eigen::Index k = prob.k();
    const Eigen::Index m = prob.n() - k;
    if (k <= m) {
      MatrixXcd B(k, prob.n());
      for (Eigen::Index j = 0; j < k; ++j) {
        VectorXcd e = VectorXcd::Zero(prob.n());
        e[prob.J[j]] = 1.0;
        B.row(j) = luST().solve(e).transpose();  // row j of S^{-1}
      }
      const VectorXcd u =
          B.adjoint() * (B * B.adjoint()).ldlt().solve(prob.s).eval();
      return luS().solve(u);
    }
    // min_t ||S(x_s + sum_i t_i e_{free_i})||_2 by least squares.
    MatrixXcd SN(prob.n(), m);
    for (Eigen::Index i = 0; i < m; ++i) SN.col(i) = prob.S.col(free_idx[i]);
    const VectorXcd xs = assemble(VectorXcd::Zero(m));
    const VectorXcd t = SN.colPivHouseholderQr().solve(VectorXcd(-prob.S * xs));
    return assemble(t);
  }
};

// Generic damped Newton with finite-difference Jacobian on a real map.
template <typename Map>
int damped_newton(VectorXd& x, const Map& F, double tol, int max_iter,
                  double fd_step, bool central) {
  VectorXd r = F(x);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (r.cwiseAbs().maxCoeff() < tol) return it;
    const Eigen::Index m = x.size();
    Eigen::MatrixXd Jac(r.size(), m);
    for (Eigen::Index c = 0; c < m; ++c) {
      VectorXd xp = x;
      xp[c] += fd_step;
      if (central) {
        VectorXd xm = x;
        xm[c] -= fd_step;
        Jac.col(c) = (F(xp) - F(xm)) / (2.0 * fd_step);
      } else {
        Jac.col(c) = (F(xp) - r) / fd_step;
      }
    }
    const VectorXd step = Jac.colPivHouseholderQr().solve(-r);
    const double r0 = r.norm();
    double lambda = 1.0;
    bool ok = false;
    for (int half = 0; half < 50; ++half) {
      const VectorXd xn = x + lambda * step;
      const VectorXd rn = F(xn);
      if (rn.norm() < (1.0 - 1e-4 * lambda) * r0 || rn.cwiseAbs().maxCoeff() < tol) {
        x = xn;
        r = rn;
        ok = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!ok) throw std::runtime_error("lp solve: Newton line search stalled");
  }
  if (r.cwiseAbs().maxCoeff() >= tol)
    throw std::runtime_error("lp solve: Newton did not converge");
  return it;
}

double next_p(double p_cur, double target, const LpSolveOptions& opts) {
  const double remaining = target - p_cur;
  double step = std::clamp(remaining, -opts.p_step, opts.p_step);
  if (std::min(p_cur, p_cur + step) < 1.2)
    step = std::clamp(remaining, -opts.p_step_small, opts.p_step_small);
  return p_cur + step;
}

}  // namespace

VectorXcd representer_map(const VectorXcd& c, const LpSProblem& problem) {
  if (c.size() != problem.k())
    throw std::invalid_argument("representer_map: coefficient size mismatch");
  return Context(problem).representer(c, problem.p);
}

LpSReport solve(const LpSProblem& problem, const LpSolveOptions& opts) {
  Context ctx(problem);
  const Eigen::Index n = problem.n();
  const Eigen::Index k = problem.k();
  const double p_target = problem.p.p;

  LpSReport rep;

  if (k == n) {
    // Every coordinate constrained: the solution is the data itself.
    rep.x_min = problem.s;
    rep.c = ctx.star_of(problem.s, problem.p);
    rep.norm = lp_s_norm(problem.s, problem.S, problem.p);
    rep.residuals = VectorXd::Zero(k);
    rep.certificate = 0.0;
    return rep;
  }

  const VectorXcd x2 = ctx.p2_solution();
  VectorXcd x = x2;
  int iterations = 0;

  // Representer parametrization when the constraint set is the smaller side,
  // complement parametrization otherwise (same optimality condition).
  const bool use_repr = (k <= n - k);

  if (use_repr) {
    const VectorXcd xstar2 = ctx.star_of(x2, Exponent(2.0));
    VectorXcd c(k);
    for (Eigen::Index j = 0; j < k; ++j) c[j] = xstar2[problem.J[j]];
    double p_cur = 2.0;
    while (std::abs(p_cur - p_target) > 1e-14) {
      p_cur = next_p(p_cur, p_target, opts);
      const Exponent pe(p_cur);
      auto F = [&](const VectorXd& creal) -> VectorXd {
        const VectorXcd xm = ctx.representer(to_complex(creal), pe);
        VectorXcd r(k);
        for (Eigen::Index j = 0; j < k; ++j) r[j] = xm[problem.J[j]] - problem.s[j];
        return to_real(r);
      };
      VectorXd creal = to_real(c);
      try {
        iterations += damped_newton(creal, F, opts.tol, opts.max_newton,
                                    opts.fd_step, p_cur < 1.5);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (last p reached: " +
                                 std::to_string(p_cur) + ")");
      }
      c = to_complex(creal);
    }
    x = ctx.representer(c, problem.p);
  } else {
    // Complement path: the constraints are eliminated, so the minimizer is a
    // critical point of the smooth convex objective phi(t) = sum |u_g|^p,
    // u(t) = S x(t). Damped Newton with the analytic gradient and Hessian
    // (real/imaginary split) is far more robust near p = 1 than root-finding
    // the star-map equations with finite differences.
    const Eigen::Index m = n - k;
    MatrixXcd SN(n, m);
    for (Eigen::Index i = 0; i < m; ++i) SN.col(i) = problem.S.col(ctx.free_idx[i]);
    const VectorXcd ufix = problem.S * ctx.assemble(VectorXcd::Zero(m));

    VectorXcd t(m);
    for (Eigen::Index i = 0; i < m; ++i) t[i] = x2[ctx.free_idx[i]];

    // eps-smoothed surrogate sum (|u_g|^2 + eps^2)^{p/2}: C^2 for eps > 0,
    // the exact objective at eps = 0.
    auto phi_only = [&](const VectorXcd& tv, double p, double eps) {
      const VectorXcd u = ufix + SN * tv;
      double acc = 0.0;
      for (Eigen::Index g = 0; g < n; ++g)
        acc += std::pow(std::norm(u[g]) + eps * eps, 0.5 * p);
      return acc;
    };
    auto derivatives = [&](const VectorXcd& tv, double p, double eps,
                           VectorXd& grad, Eigen::MatrixXd& H) {
      const VectorXcd u = ufix + SN * tv;
      double acc = 0.0;
      grad.setZero(2 * m);
      H.setZero(2 * m, 2 * m);
      Eigen::MatrixXd Jr(2, 2 * m);
      for (Eigen::Index g = 0; g < n; ++g) {
        const Complex ug = u[g];
        const double a2 = std::norm(ug);
        const double r2 = a2 + eps * eps;
        acc += std::pow(r2, 0.5 * p);
        if (r2 < 1e-300) continue;
        const double w1 = p * std::pow(r2, 0.5 * p - 1.0);
        // d(Re u, Im u)/d(Re t_i, Im t_i) from the complex entry S_{g,i}.
        for (Eigen::Index i = 0; i < m; ++i) {
          const Complex c = SN(g, i);
          Jr(0, 2 * i) = c.real();
          Jr(1, 2 * i) = c.imag();
          Jr(0, 2 * i + 1) = -c.imag();
          Jr(1, 2 * i + 1) = c.real();
        }
        const Eigen::Vector2d uv(ug.real(), ug.imag());
        grad.noalias() += Jr.transpose() * (w1 * uv);
        // Hessian of (|u|^2 + eps^2)^{p/2} in (Re u, Im u); at eps = 0 the
        // radius is floored so the p < 2 weight stays finite at kinks
        // (regularization of the model only, the gradient is exact).
        const double rf2 = std::max(r2, 1e-20);
        Eigen::Matrix2d H2 =
            p * std::pow(rf2, 0.5 * p - 1.0) * Eigen::Matrix2d::Identity();
        H2.noalias() +=
            p * (p - 2.0) * std::pow(rf2, 0.5 * p - 2.0) * (uv * uv.transpose());
        H.noalias() += Jr.transpose() * H2 * Jr;
      }
      return acc;
    };

    // One damped-Newton run at fixed (p, eps).  Returns true when the
    // gradient tolerance was met; otherwise the iterate simply stops moving.
    auto newton_stage = [&](double p_cur, double eps, double gtol_scale = 1.0,
                            bool stall_floor_ok = false) {
      VectorXd grad;
      Eigen::MatrixXd H;
      bool stalled = false;
      for (int it = 0; it < opts.max_newton && !stalled; ++it) {
        const double phi = derivatives(t, p_cur, eps, grad, H);
        double gtol = gtol_scale * opts.tol * std::max(1.0, phi);
        if (eps > 0.0 && stall_floor_ok) {
          // Rounding floor of the achievable gradient: descent per Newton
          // step is ~ |g|^2 / lambda_max, which the line search cannot
          // resolve once it drops below the evaluation noise of phi.
          const double lam_max = H.cwiseAbs().rowwise().sum().maxCoeff();
          gtol = std::max(
              gtol, 10.0 * std::sqrt(1e-15 * std::max(1.0, phi) * lam_max));
        }
        if (grad.cwiseAbs().maxCoeff() < gtol) return true;
        ++iterations;
        double ridge = 1e-14 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
        VectorXd step;
        bool accepted = false;
        double taken = 0.0;
        for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
          Eigen::MatrixXd Hr = H;
          Hr.diagonal().array() += ridge;
          step = Hr.ldlt().solve(-grad);
          const double slope = grad.dot(step);
          double lambda = 1.0;
          for (int half = 0; half < 48; ++half) {
            const VectorXcd tn = t + lambda * to_complex(step);
            if (phi_only(tn, p_cur, eps) <= phi + 1e-4 * lambda * slope) {
              t = tn;
              accepted = true;
              taken = lambda;
              break;
            }
            lambda *= 0.5;
          }
          ridge *= 100.0;  // steeper damping if the line search stalls
        }
        if (!accepted ||
            taken * step.cwiseAbs().maxCoeff() <
                1e-14 * std::max(1.0, to_real(t).cwiseAbs().maxCoeff()))
          stalled = true;
      }
      return false;
    };

    double p_cur = 2.0;
    while (std::abs(p_cur - p_target) > 1e-14) {
      p_cur = next_p(p_cur, p_target, opts);
      // Near p = 1 the objective is almost piecewise linear and near-zero
      // residuals make the exact Hessian useless, so approach through C^2
      // smoothed surrogates before the exact solve.  Convergence on the
      // surrogate with radius eps certifies phi(t) <= min phi + n * eps^p,
      // which serves as a fallback acceptance when the exact gradient
      // tolerance is unreachable in double precision.
      bool smooth_ok = false;
      double smooth_bound = 0.0;
      if (p_cur < 1.6) {
        const double scale =
            std::max(1.0, (ufix + SN * t).cwiseAbs().maxCoeff());
        newton_stage(p_cur, 1e-4 * scale);
        newton_stage(p_cur, 1e-5 * scale);
        const double eps_cert = 1e-6 * scale;
        // Relaxed gradient tolerance: the certificate only needs approximate
        // stationarity of the smoothed problem, and the extra suboptimality
        // from a gradient of this size is far below the eps term.
        for (int attempt = 0; attempt < 3 && !smooth_ok; ++attempt)
          smooth_ok = newton_stage(p_cur, eps_cert, 1e5, true);
        smooth_bound = static_cast<double>(n) * std::pow(eps_cert, p_cur);
        newton_stage(p_cur, 1e-8 * scale);
      }
      if (!newton_stage(p_cur, 0.0)) {
        VectorXd grad;
        Eigen::MatrixXd H;
        const double phi = derivatives(t, p_cur, 0.0, grad, H);
        // Curvature ~ |u|^{p-2} at near-zero residuals amplifies machine-eps
        // iterate noise into the gradient, so judge by the relative gradient
        // or by the certified suboptimality of the smoothed solve.
        if (std::getenv("MINTERP_LP_DEBUG"))
          fprintf(stderr, "[dbg] p=%g phi=%g rel=%.3g smooth_ok=%d bound=%.3g\n",
                  p_cur, phi, grad.cwiseAbs().maxCoeff() / std::max(1.0, phi),
                  (int)smooth_ok, smooth_bound);
        if (grad.cwiseAbs().maxCoeff() <= 1e-3 * std::max(1.0, phi)) {
          // acceptably stationary
        } else if (smooth_ok && smooth_bound <= 1e-4 * std::max(1.0, phi)) {
          rep.warnings.push_back(
              "accepted via smoothed-objective certificate at p=" +
              std::to_string(p_cur) +
              " (suboptimality <= " + std::to_string(smooth_bound) + ")");
        } else {
          throw std::runtime_error(
              "lp solve: Newton did not converge (last p reached: " +
              std::to_string(p_cur) + ")");
        }
      }
    }
    x = ctx.assemble(t);
  }

  const VectorXcd xstar = ctx.star_of(x, problem.p);
  rep.x_min = x;
  rep.c.resize(k);
  rep.residuals.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    rep.c[j] = xstar[problem.J[j]];
    rep.residuals[j] = std::abs(x[problem.J[j]] - problem.s[j]);
  }
  rep.norm = lp_s_norm(x, problem.S, problem.p);
  double worst = 0.0;
  for (int i : ctx.free_idx) {
    VectorXcd e = VectorXcd::Zero(n);
    e[i] = 1.0;
    const double en = lp_s_norm(e, problem.S, problem.p);
    worst = std::max(worst, std::abs(xstar[i]) / (en * std::max(rep.norm, 1e-300)));
  }
  rep.certificate = worst;
  rep.iterations = iterations;
  return rep;
}

std::pair<VectorXcd, double> convex_oracle(const LpSProblem& problem,
                                           const OracleOptions& opts) {
  Context ctx(problem);
  const Eigen::Index m = problem.n() - problem.k();
  const double p = problem.p.p;

  auto objective = [&](const VectorXcd& t, VectorXcd* grad) {
    const VectorXcd u = problem.S * ctx.assemble(t);
    double val = 0.0;
    VectorXcd wu(u.size());
    bool tiny = false;
    for (Eigen::Index g = 0; g < u.size(); ++g) {
      const double a = std::abs(u[g]);
      if (a < 1e-8) tiny = true;
      val += std::pow(a, p);
      wu[g] = (a < 1e-300) ? Complex(0.0) : std::pow(a, p - 2.0) * u[g];
    }
    if (grad) {
      const VectorXcd gc = p * (problem.S.adjoint() * wu);
      grad->resize(m);
      for (Eigen::Index i = 0; i < m; ++i) (*grad)[i] = gc[ctx.free_idx[i]];
    }
    return std::make_pair(val, tiny);
  };

  auto real_dot = [](const VectorXcd& a, const VectorXcd& b) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return acc;
  };

  VectorXcd t = VectorXcd::Zero(m);
  if (opts.start) {
    if (opts.start->size() != m)
      throw std::invalid_argument("convex_oracle: start size mismatch");
    t = *opts.start;
  }
  VectorXcd g;
  auto [fval, tiny] = objective(t, &g);

  long it = 0;
  double alpha = 1.0 / std::max(1.0, g.norm());
  for (; it < opts.max_iters; ++it) {
    if (g.norm() < opts.grad_tol * std::max(1.0, fval)) break;
    VectorXcd t_new;
    double f_new = 0.0;
    double a = alpha;
    bool ok = false;
    for (int bt = 0; bt < 60; ++bt) {
      t_new = t - a * g;
      f_new = objective(t_new, nullptr).first;
      if (f_new < fval) {
        ok = true;
        break;
      }
      a *= 0.5;
    }
    if (!ok) break;
    VectorXcd g_new;
    std::tie(fval, tiny) = objective(t_new, &g_new);
    fval = f_new;
    const VectorXcd dt = t_new - t;
    const VectorXcd dg = g_new - g;
    const double dgdg = real_dot(dg, dg);
    alpha = (dgdg > 0.0) ? std::abs(real_dot(dt, dg)) / dgdg : a;
    t = t_new;
    g = g_new;
  }
  if (it >= opts.max_iters)
    throw std::runtime_error("convex_oracle: iteration cap exceeded");

  // Newton polish on the smooth objective.
  const Eigen::Index mr = 2 * m;
  for (int polish = 0; polish < 40 && mr > 0; ++polish) {
    std::tie(fval, tiny) = objective(t, &g);
    if (g.norm() < 1e-13 * std::max(1.0, fval)) break;
    Eigen::MatrixXd H(mr, mr);
    const double hstep = 1e-6 * std::max(1.0, t.norm());
    const VectorXd gr = to_real(g);
    for (Eigen::Index c = 0; c < mr; ++c) {
      VectorXd tr = to_real(t);
      tr[c] += hstep;
      VectorXcd gp;
      objective(to_complex(tr), &gp);
      H.col(c) = (to_real(gp) - gr) / hstep;
    }
    H = 0.5 * (H + H.transpose()).eval();
    if (p < 2.0 && tiny) H.diagonal().array() += 1e-12;
    H.diagonal().array() += 1e-14 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
    const VectorXd step = H.ldlt().solve(-gr);
    double lambda = 1.0;
    bool ok = false;
    for (int bt = 0; bt < 40; ++bt) {
      const VectorXcd t_new = t + lambda * to_complex(step);
      const double f_new = objective(t_new, nullptr).first;
      if (f_new <= fval) {
        t = t_new;
        fval = f_new;
        ok = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!ok) break;
  }

  const VectorXcd x = ctx.assemble(t);
  return {x, lp_s_norm(x, problem.S, problem.p)};
}

std::vector<SweepRow> p_sweep(const MatrixXcd& S, const std::vector<int>& J,
                              const VectorXcd& s, const std::vector<double>& p_grid,
                              const LpSolveOptions& opts) {
  for (size_t i = 1; i < p_grid.size(); ++i)
    if (p_grid[i] <= p_grid[i - 1])
      throw std::invalid_argument("p_sweep: grid must be strictly increasing");
  std::vector<SweepRow> rows;
  double lipschitz = 1.0;
  for (size_t i = 0; i < p_grid.size(); ++i) {
    LpSProblem prob(S, J, s, Exponent(p_grid[i]));
    LpSReport rep;
    try {
      rep = solve(prob, opts);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("p_sweep at p=" + std::to_string(p_grid[i]) + ": " +
                               e.what());
    }
    SweepRow row{p_grid[i], rep.x_min, rep.norm, false};
    if (i >= 1) {
      const double dp = p_grid[i] - p_grid[i - 1];
      const double dx = (row.x_min - rows.back().x_min).norm();
      if (i >= 2 && dx > 10.0 * dp * lipschitz) row.discontinuity_flag = true;
      lipschitz = std::max(lipschitz, dx / dp);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lps
}  // namespace minterp
