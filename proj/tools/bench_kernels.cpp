// Kernel micro-benchmark: times each OpenMP kernel against its serial
// reference on a mid-size annulus and prints a throughput table plus the
// maximum observed deviation (which must sit at rounding level).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/ops.hpp"
#include "ccsim/parallel.hpp"
#include "ccsim/serial_ops.hpp"
#include "ccsim/test_functions.hpp"

using namespace ccsim;
using clk = std::chrono::steady_clock;

namespace {

double time_ms(int reps, const std::function<void()>& body) {
  body();  // warm-up
  const auto t0 = clk::now();
  for (int r = 0; r < reps; ++r) body();
  const auto t1 = clk::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  int nr = 192, ntheta = 384, reps = 25;
  if (argc > 1) nr = std::atoi(argv[1]);
  if (argc > 2) ntheta = std::atoi(argv[2]);
  if (argc > 3) reps = std::atoi(argv[3]);

  const Grid g = make_annulus(1.0, 2.0, nr, ntheta);
  const ScalarField f = gen_test_function(42, g, TestFnKind::LowFourierPositive);
  std::printf("grid: annulus %dx%d (%d cells), threads: %d, reps: %d\n", nr, ntheta,
              g.ncells(), par::max_threads(), reps);
  std::printf("%-12s %12s %12s %9s %12s\n", "kernel", "serial ms", "parallel ms",
              "speedup", "max |diff|");

  auto row = [&](const char* name, double ts, double tp, double diff) {
    std::printf("%-12s %12.3f %12.3f %8.2fx %12.3e\n", name, ts, tp, ts / tp, diff);
  };

  {
    FaceField gs = serial::gradient(f), gp = gradient(f);
    const double diff =
        std::max(max_abs_diff(gs.f0, gp.f0), max_abs_diff(gs.f1, gp.f1));
    row("gradient", time_ms(reps, [&] { gs = serial::gradient(f); }),
        time_ms(reps, [&] { gp = gradient(f); }), diff);
  }
  {
    const FaceField flux = gradient(f);
    ScalarField ds = serial::divergence(flux), dp = divergence(flux);
    row("divergence", time_ms(reps, [&] { ds = serial::divergence(flux); }),
        time_ms(reps, [&] { dp = divergence(flux); }), max_abs_diff(ds.v, dp.v));
  }
  {
    ScalarField ls = serial::laplacian(f), lp = laplacian(f);
    row("laplacian", time_ms(reps, [&] { ls = serial::laplacian(f); }),
        time_ms(reps, [&] { lp = laplacian(f); }), max_abs_diff(ls.v, lp.v));
  }
  {
    HessField hs = serial::hessian(f), hp = hessian(f);
    double diff = std::max({max_abs_diff(hs.h00, hp.h00), max_abs_diff(hs.h01, hp.h01),
                            max_abs_diff(hs.h11, hp.h11)});
    row("hessian", time_ms(reps, [&] { hs = serial::hessian(f); }),
        time_ms(reps, [&] { hp = hessian(f); }), diff);
  }
  {
    double is = serial::integrate(f), ip = integrate(f);
    row("integrate", time_ms(reps, [&] { is = serial::integrate(f); }),
        time_ms(reps, [&] { ip = integrate(f); }), std::abs(is - ip));
  }
  {
    double ns = serial::norm_l2(f), np = norm_l2(f);
    row("norm_l2", time_ms(reps, [&] { ns = serial::norm_l2(f); }),
        time_ms(reps, [&] { np = norm_l2(f); }), std::abs(ns - np));
  }
  return 0;
}
