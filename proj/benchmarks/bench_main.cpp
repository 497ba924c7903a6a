#include <benchmark/benchmark.h>

#include <minterp/even_p_lift.hpp>
#include <minterp/hardy_disk.hpp>
#include <minterp/kernels.hpp>
#include <minterp/lp_affine.hpp>
#include <minterp/sip_core.hpp>

#include <random>

using namespace minterp;

namespace {

VectorXcd random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXcd x(n);
  for (int i = 0; i < n; ++i) x[i] = Complex(gauss(rng), gauss(rng));
  return x;
}

void bm_star_lp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const VectorXcd x = random_vector(n, 1);
  const Exponent p(1.7);
  for (auto _ : state) benchmark::DoNotOptimize(star_lp(x, p));
}
BENCHMARK(bm_star_lp)->Arg(64)->Arg(1024);

void bm_kernel_eval(benchmark::State& state) {
  const SpaceDescriptor berg(SpaceFamily::BergmanBall, 2, Exponent(2.0));
  Point w(2), z(2);
  w << Complex(0.25, 0.1), Complex(0.0, 0.6);
  z << Complex(-0.3, 0.2), 0.4;
  for (auto _ : state) benchmark::DoNotOptimize(kernel_eval(berg, w, z));
}
BENCHMARK(bm_kernel_eval);

void bm_lp_solve_4x4(benchmark::State& state) {
  Eigen::MatrixXd H(4, 4);
  H << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
  const MatrixXcd S = (H / 4.0).cast<Complex>();
  const VectorXcd s = (VectorXcd(3) << 1.0, 2.0, 3.0).finished();
  const double pv = static_cast<double>(state.range(0)) / 100.0;
  const lps::LpSProblem prob(S, {0, 1, 2}, s, Exponent(pv));
  for (auto _ : state) benchmark::DoNotOptimize(lps::solve(prob));
}
BENCHMARK(bm_lp_solve_4x4)->Arg(150)->Arg(300);

void bm_hardy_solve_p2(benchmark::State& state) {
  const VectorXcd nodes =
      (VectorXcd(3) << 0.5, -1.0 / 3.0, Complex(0.0, 0.25)).finished();
  const VectorXcd values = (VectorXcd(3) << 1.0, 0.9, 0.8).finished();
  const hardy::HardyProblem prob(nodes, values, Exponent(2.0));
  for (auto _ : state) benchmark::DoNotOptimize(hardy::solve(prob));
}
BENCHMARK(bm_hardy_solve_p2);

void bm_rkhs_solve(benchmark::State& state) {
  const SpaceDescriptor disk(SpaceFamily::HardyDisk, 1, Exponent(2.0));
  std::vector<Point> nodes;
  for (int i = 0; i < 8; ++i)
    nodes.push_back(make_point(std::polar(0.6, 2.0 * M_PI * i / 8.0)));
  const VectorXcd values = random_vector(8, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(evenp::rkhs_solve(disk, nodes, values));
}
BENCHMARK(bm_rkhs_solve);

}  // namespace

BENCHMARK_MAIN();
