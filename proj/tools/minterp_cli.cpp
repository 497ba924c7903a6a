// Command-line front end: minimal-norm interpolation problems in, solution
// tables and plot data out.
//
// Complex values are "a+bi" strings in CSV cells and [re, im] pairs in JSON.
// Exit codes: 0 success, 1 input error, 2 solver non-convergence or oracle
// gap beyond tolerance, 3 certificate failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "minterp/even_p_lift.hpp"
#include "minterp/hardy_disk.hpp"
#include "minterp/io.hpp"
#include "minterp/kernels.hpp"
#include "minterp/lp_affine.hpp"
#include "minterp/tde.hpp"

using json = nlohmann::json;
using namespace minterp;

namespace {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("SIP_INTERP_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "error") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 1;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[info] " << msg << "\n";
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

json to_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Complex json_to_complex(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_string()) return io::parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2)
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("expected a complex value (number, \"a+bi\" or [re, im])");
}

VectorXcd json_to_cvector(const json& j) {
  VectorXcd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = json_to_complex(j[i]);
  return v;
}

MatrixXcd json_to_cmatrix(const json& j) {
  if (j.empty()) throw std::invalid_argument("empty matrix");
  MatrixXcd m(j.size(), j[0].size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size()) throw std::invalid_argument("ragged matrix");
    for (size_t k = 0; k < j[i].size(); ++k) m(i, k) = json_to_complex(j[i][k]);
  }
  return m;
}

VectorXcd parse_complex_list(const std::vector<std::string>& items) {
  VectorXcd v(items.size());
  for (size_t i = 0; i < items.size(); ++i) v[i] = io::parse_complex(items[i]);
  return v;
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw std::invalid_argument("cannot write '" + output + "'");
  out << text;
}

SpaceFamily parse_family(const std::string& name) {
  if (name == "hardy-disk") return SpaceFamily::HardyDisk;
  if (name == "hardy-ball") return SpaceFamily::HardyBall;
  if (name == "bergman-ball") return SpaceFamily::BergmanBall;
  if (name == "hardy-polydisk") return SpaceFamily::HardyPolydisk;
  if (name == "hardy-half-plane") return SpaceFamily::HardyHalfPlane;
  if (name == "weighted-bergman-disk") return SpaceFamily::WeightedBergmanDisk;
  if (name == "weighted-bergman-half-plane")
    return SpaceFamily::WeightedBergmanHalfPlane;
  throw std::invalid_argument("unknown space '" + name + "'");
}

struct LpProblemData {
  MatrixXcd S;
  std::vector<int> J;  // 0-based
  VectorXcd s;
};

// JSON schema: { "S": [[...]], "J": [1-based indices], "s": [...] } with
// complex entries as numbers, "a+bi" strings, or [re, im] pairs.
LpProblemData load_lp_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  json j;
  in >> j;
  LpProblemData out;
  out.S = json_to_cmatrix(j.at("S"));
  for (const auto& idx : j.at("J")) out.J.push_back(idx.get<int>() - 1);
  out.s = json_to_cvector(j.at("s"));
  return out;
}

struct OracleCheck {
  bool enabled = false;
  double tol = 1e-3;
};

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const std::invalid_argument*>(&e)) return 1;
  const std::string what = e.what();
  if (what.find("certificate") != std::string::npos) return 3;
  return 2;
}

// --- subcommand payloads -------------------------------------------------

int run_interp_single(const std::string& space_name, double p, double alpha,
                      const std::vector<std::string>& node_s,
                      const std::string& value_s,
                      const std::vector<std::string>& eval_s,
                      const OracleCheck& oracle, const std::string& output) {
  SpaceDescriptor space(parse_family(space_name),
                        static_cast<int>(node_s.size()), Exponent(p), alpha);
  const Point z0 = parse_complex_list(node_s);
  const Complex w0 = io::parse_complex(value_s);
  const auto f = single_point_interpolant(space, z0, w0);

  json out;
  out["space"] = space_name;
  out["p"] = p;
  out["node"] = to_json(z0);
  out["value"] = to_json(w0);
  out["norm"] = f.norm;
  out["kernel_ratio_exponent"] = f.exponent_of_kernel_ratio;
  if (!eval_s.empty()) {
    json evals = json::array();
    for (const auto& e : eval_s) {
      const Point z = parse_complex_list({e});
      evals.push_back({{"z", to_json(z)}, {"f", to_json(evaluate_interpolant(f, z))}});
    }
    out["evaluations"] = evals;
  }
  if (oracle.enabled) {
    double quad = 0.0;
    auto f1 = [&](Complex z) { return evaluate_interpolant(f, make_point(z)); };
    switch (space.family) {
      case SpaceFamily::HardyDisk:
        quad = hardy_disk_boundary_norm(f1, space.p, 4096);
        break;
      case SpaceFamily::BergmanBall:
        if (space.n != 1)
          throw std::invalid_argument("--oracle supports one-variable spaces");
        quad = bergman_disk_norm(f1, space.p, 128, 512);
        break;
      case SpaceFamily::HardyHalfPlane:
        if (space.n != 1)
          throw std::invalid_argument("--oracle supports one-variable spaces");
        quad = half_plane_boundary_norm(f1, space.p, 64, 24);
        break;
      default:
        throw std::invalid_argument("--oracle supports one-variable spaces");
    }
    const double gap = std::abs(quad - f.norm) / std::max(1e-300, f.norm);
    out["oracle_norm"] = quad;
    out["oracle_gap"] = gap;
    if (gap > oracle.tol) {
      emit(output, out.dump(2) + "\n");
      std::cerr << "oracle gap " << gap << " exceeds tolerance " << oracle.tol
                << "\n";
      return 2;
    }
  }
  emit(output, out.dump(2) + "\n");
  return 0;
}

int run_interp_hardy(const std::vector<std::string>& node_s,
                     const std::vector<std::string>& value_s, double p,
                     const OracleCheck& oracle, const std::string& output) {
  hardy::HardyProblem prob(parse_complex_list(node_s), parse_complex_list(value_s),
                           Exponent(p));
  log_info("solving Hardy disk problem with " + std::to_string(node_s.size()) +
           " nodes at p=" + std::to_string(p));
  const auto rep = hardy::solve(prob);

  json out;
  out["p"] = p;
  out["nodes"] = to_json(prob.nodes);
  out["values"] = to_json(prob.values);
  out["d"] = to_json(rep.solution.d);
  json zeros = json::array();
  for (Complex a : rep.solution.blaschke_zeros) zeros.push_back(to_json(a));
  out["blaschke_zeros"] = zeros;
  out["norm"] = rep.norm;
  out["residuals"] = to_json(rep.residuals);
  out["certificate"] = rep.certificate;
  out["warnings"] = rep.warnings;
  if (oracle.enabled) {
    const auto orc = hardy::truncated_oracle(prob, 60, 2048);
    const double gap = std::abs(orc.norm - rep.norm) / std::max(1e-300, rep.norm);
    out["oracle_norm"] = orc.norm;
    out["oracle_gap"] = gap;
    if (gap > oracle.tol) {
      emit(output, out.dump(2) + "\n");
      std::cerr << "oracle gap " << gap << " exceeds tolerance " << oracle.tol
                << "\n";
      return 2;
    }
  }
  emit(output, out.dump(2) + "\n");
  return 0;
}

int run_lp_min(const std::string& problem_path, double p, const OracleCheck& oracle,
               const std::string& output) {
  const LpProblemData data = load_lp_problem(problem_path);
  lps::LpSProblem prob(data.S, data.J, data.s, Exponent(p));
  const auto rep = lps::solve(prob);

  json out;
  out["p"] = p;
  out["x_min"] = to_json(rep.x_min);
  out["c"] = to_json(rep.c);
  out["norm"] = rep.norm;
  out["certificate"] = rep.certificate;
  out["iterations"] = rep.iterations;
  if (oracle.enabled) {
    const auto [x, norm] = lps::convex_oracle(prob);
    const double gap = std::abs(norm - rep.norm) / std::max(1e-300, rep.norm);
    out["oracle_norm"] = norm;
    out["oracle_gap"] = gap;
    if (gap > oracle.tol) {
      emit(output, out.dump(2) + "\n");
      std::cerr << "oracle gap " << gap << " exceeds tolerance " << oracle.tol
                << "\n";
      return 2;
    }
  }
  emit(output, out.dump(2) + "\n");
  return 0;
}

int run_even_p(const std::string& space_name, int p, double alpha, int nvars,
               const std::vector<std::string>& node_s,
               const std::vector<std::string>& value_s, const std::string& output) {
  if (node_s.size() % nvars != 0)
    throw std::invalid_argument("node list length must be a multiple of n");
  const size_t k = node_s.size() / nvars;
  if (value_s.size() != k)
    throw std::invalid_argument("need one value per node");

  SpaceDescriptor space(parse_family(space_name), nvars, Exponent(2.0), alpha);
  std::vector<Point> nodes;
  for (size_t i = 0; i < k; ++i) {
    Point z(nvars);
    for (int j = 0; j < nvars; ++j)
      z[j] = io::parse_complex(node_s[i * nvars + j]);
    nodes.push_back(z);
  }
  const VectorXcd values = parse_complex_list(value_s);

  const auto g = evenp::rkhs_solve(space, nodes, evenp::powered_values(values, p));
  const auto [f, cert] = evenp::lift(g, p, values);

  json out;
  out["space"] = space_name;
  out["p"] = p;
  out["c"] = to_json(g.c);
  out["norm"] = f.norm();
  out["certificate"] = {{"zero_free", cert.zero_free},
                        {"min_modulus_bound", cert.min_modulus_bound},
                        {"grid_used", cert.grid_used},
                        {"branch_consistent", cert.branch_consistent},
                        {"analytic_bound", cert.analytic_bound}};
  emit(output, out.dump(2) + "\n");
  if (!cert.passed()) {
    std::cerr << "lift certificate failed; use the general solver\n";
    return 3;
  }
  return 0;
}

int run_tde(bool synthetic, std::uint64_t seed, int N, int D, int M, double beta,
            double noise, double p, const std::string& x1_path,
            const std::string& x2_path, const std::string& output) {
  std::optional<tde::TdeProblem> prob;
  if (synthetic) {
    prob.emplace(tde::make_synthetic(N, D, M, beta, noise, Exponent(p), seed));
  } else {
    if (x1_path.empty() || x2_path.empty())
      throw std::invalid_argument("provide --x1/--x2 or --synthetic");
    const VectorXd x1 = io::read_signal_file(x1_path);
    const VectorXd x2 = io::read_signal_file(x2_path);
    prob.emplace(x1, x2, M, beta, Exponent(p), -static_cast<double>(M),
                 static_cast<double>(M));
  }
  log_info("estimating delay, N=" + std::to_string(prob->N()) +
           ", p=" + std::to_string(p));
  const auto res = tde::estimate(*prob);

  json out;
  out["D_opt"] = res.D_opt;
  out["h_opt"] = to_json(res.h_opt);
  out["objective"] = res.objective;
  out["rank"] = res.rank;
  emit(output, out.dump(2) + "\n");
  return 0;
}

int run_sweep_p(const std::string& problem_path, double pmin, double pmax,
                int points, bool log_grid, bool with_solutions, int jobs,
                const std::string& output) {
  if (points < 2 || !(pmin > 1.0) || !(pmax > pmin))
    throw std::invalid_argument("need points >= 2 and 1 < pmin < pmax");
  const LpProblemData data = load_lp_problem(problem_path);

  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    grid[i] = log_grid ? pmin * std::pow(pmax / pmin, t)
                       : pmin + t * (pmax - pmin);
  }

  // Fan out across workers; each job owns its solver state and the rows are
  // assembled in p order afterwards.
  const int workers = std::max(1, jobs);
  std::vector<lps::SweepRow> rows(points);
  std::vector<std::thread> pool;
  std::mutex err_mutex;
  std::vector<std::string> errors;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < points; i = next.fetch_add(1)) {
        try {
          lps::LpSProblem prob(data.S, data.J, data.s, Exponent(grid[i]));
          const auto rep = lps::solve(prob);
          rows[i] = lps::SweepRow{grid[i], rep.x_min, rep.norm, false};
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(err_mutex);
          errors.push_back("p=" + std::to_string(grid[i]) + ": " + e.what());
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (!errors.empty()) throw std::runtime_error(errors.front());

  std::ostringstream csv;
  csv << "p,norm";
  if (with_solutions)
    for (Eigen::Index j = 0; j < data.S.rows(); ++j) csv << ",x" << (j + 1);
  csv << "\n";
  csv.precision(12);
  for (const auto& row : rows) {
    csv << row.p << "," << row.norm;
    if (with_solutions)
      for (Eigen::Index j = 0; j < row.x_min.size(); ++j)
        csv << "," << io::format_complex(row.x_min[j]);
    csv << "\n";
  }
  emit(output, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Minimal-norm interpolation in Hardy/Bergman spaces and l^p_S sequence "
      "spaces.\nComplex values: \"a+bi\" in CSV cells, [re, im] pairs in JSON."};
  app.require_subcommand(1);

  std::string output;
  app.add_option("-o,--output", output, "Output path ('-' for stdout)");
  OracleCheck oracle;
  app.add_flag("--oracle", oracle.enabled,
               "Cross-check against the independent convex oracle");
  app.add_option("--oracle-tol", oracle.tol, "Relative oracle gap tolerance");

  // interp-single
  auto* single = app.add_subcommand("interp-single",
                                    "Single-node closed-form interpolant");
  std::string space_name = "hardy-disk", value_str = "1";
  double p_val = 2.0, alpha = 0.0;
  std::vector<std::string> node_strs, eval_strs;
  single->add_option("--space", space_name, "Space family");
  single->add_option("--p", p_val, "Exponent (1 < p < inf)");
  single->add_option("--alpha", alpha, "Bergman weight");
  single->add_option("--node", node_strs, "Node coordinates (one per variable)")
      ->required();
  single->add_option("--value", value_str, "Target value");
  single->add_option("--eval", eval_strs, "Points to evaluate at (n = 1 only)");

  // interp-hardy
  auto* hardy_cmd = app.add_subcommand("interp-hardy",
                                       "Multi-node Hardy disk interpolant");
  std::vector<std::string> hnodes, hvalues;
  double hp = 2.0;
  hardy_cmd->add_option("--node", hnodes, "Nodes in the open disk")->required();
  hardy_cmd->add_option("--value", hvalues, "Target values")->required();
  hardy_cmd->add_option("--p", hp, "Exponent");

  // lp-min
  auto* lp_cmd = app.add_subcommand("lp-min", "Minimal-norm vector in l^p_S");
  std::string lp_problem;
  double lp_p = 2.0;
  lp_cmd->add_option("--problem", lp_problem, "Problem JSON (S, J 1-based, s)")
      ->required();
  lp_cmd->add_option("--p", lp_p, "Exponent");

  // even-p
  auto* even_cmd = app.add_subcommand("even-p", "Even-exponent RKHS lift");
  std::string ev_space = "hardy-disk";
  int ev_p = 4, ev_n = 1;
  double ev_alpha = 0.0;
  std::vector<std::string> ev_nodes, ev_values;
  even_cmd->add_option("--space", ev_space, "Space family");
  even_cmd->add_option("--p", ev_p, "Even exponent");
  even_cmd->add_option("--n", ev_n, "Number of variables");
  even_cmd->add_option("--alpha", ev_alpha, "Bergman weight");
  even_cmd->add_option("--node", ev_nodes, "Node coordinates (n per node)")
      ->required();
  even_cmd->add_option("--value", ev_values, "Target values")->required();

  // tde
  auto* tde_cmd = app.add_subcommand("tde", "Time-delay estimation");
  bool synthetic = false;
  std::uint64_t seed = 1;
  int tN = 2001, tD = 5, tM = 10;
  double tbeta = 1.0, tnoise = 0.4, tp = 1.01;
  std::string x1_path, x2_path;
  tde_cmd->add_flag("--synthetic", synthetic, "Generate the two-channel data");
  tde_cmd->add_option("--seed", seed, "RNG seed");
  tde_cmd->add_option("--N", tN, "Signal length");
  tde_cmd->add_option("--D", tD, "True integer delay (synthetic)");
  tde_cmd->add_option("--M", tM, "Filter half-window");
  tde_cmd->add_option("--beta", tbeta, "Attenuation");
  tde_cmd->add_option("--noise", tnoise, "Impulsive noise amplitude");
  tde_cmd->add_option("--p", tp, "Exponent");
  tde_cmd->add_option("--x1", x1_path, "Channel 1 CSV (one sample per line)");
  tde_cmd->add_option("--x2", x2_path, "Channel 2 CSV");

  // sweep-p
  auto* sweep_cmd = app.add_subcommand("sweep-p", "Norm curve over a p grid");
  std::string sweep_problem;
  double pmin = 1.1, pmax = 10.0;
  int points = 30, jobs = 1;
  bool linear = false, with_solutions = false;
  sweep_cmd->add_option("--problem", sweep_problem, "Problem JSON")->required();
  sweep_cmd->add_option("--pmin", pmin, "Grid start (> 1)");
  sweep_cmd->add_option("--pmax", pmax, "Grid end");
  sweep_cmd->add_option("--points", points, "Grid size");
  sweep_cmd->add_flag("--linear", linear, "Linear grid instead of log");
  sweep_cmd->add_flag("--solutions", with_solutions, "Append x columns");
  sweep_cmd->add_option("--jobs", jobs, "Worker threads");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    if (single->parsed())
      return run_interp_single(space_name, p_val, alpha, node_strs, value_str,
                               eval_strs, oracle, output);
    if (hardy_cmd->parsed())
      return run_interp_hardy(hnodes, hvalues, hp, oracle, output);
    if (lp_cmd->parsed()) return run_lp_min(lp_problem, lp_p, oracle, output);
    if (even_cmd->parsed())
      return run_even_p(ev_space, ev_p, ev_alpha, ev_n, ev_nodes, ev_values,
                        output);
    if (tde_cmd->parsed())
      return run_tde(synthetic, seed, tN, tD, tM, tbeta, tnoise, tp, x1_path,
                     x2_path, output);
    if (sweep_cmd->parsed())
      return run_sweep_p(sweep_problem, pmin, pmax, points, !linear,
                         with_solutions, jobs, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 1;
}
