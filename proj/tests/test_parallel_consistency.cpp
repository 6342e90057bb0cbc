#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/ops.hpp"
#include "ccsim/parallel.hpp"
#include "ccsim/serial_ops.hpp"
#include "ccsim/test_functions.hpp"

using namespace ccsim;

namespace {

std::vector<Grid> reference_grids() {
  std::vector<Grid> gs;
  gs.push_back(make_interval(1.0, 256));
  gs.push_back(make_rectangle(2.0, 1.5, 32, 24));
  gs.push_back(make_annulus(0.5, 1.5, 24, 48));
  return gs;
}

}  // namespace

TEST_CASE("map kernels match the serial reference bitwise") {
  for (const Grid& g : reference_grids()) {
    CAPTURE(geometry_name(g.geom));
    const ScalarField f = gen_test_function(7, g, TestFnKind::LowFourierPositive);

    const FaceField gp = gradient(f), gs = serial::gradient(f);
    CHECK(gp.f0 == gs.f0);
    CHECK(gp.f1 == gs.f1);

    const ScalarField lp = laplacian(f), ls = serial::laplacian(f);
    CHECK(lp.v == ls.v);

    const ScalarField dp = divergence(gp), ds = serial::divergence(gs);
    CHECK(dp.v == ds.v);

    const HessField hp = hessian(f), hs = serial::hessian(f);
    CHECK(hp.h00 == hs.h00);
    CHECK(hp.h01 == hs.h01);
    CHECK(hp.h11 == hs.h11);
  }
}

TEST_CASE("reductions agree with the serial reference to 1e-13 relative") {
  for (const Grid& g : reference_grids()) {
    CAPTURE(geometry_name(g.geom));
    const ScalarField f = gen_test_function(11, g, TestFnKind::BumpPlusFloor);
    const double ip = integrate(f), is = serial::integrate(f);
    CHECK(std::abs(ip - is) <= 1e-13 * std::abs(is));
    const double np = norm_l2(f), ns = serial::norm_l2(f);
    CHECK(std::abs(np - ns) <= 1e-13 * ns);
  }
}

TEST_CASE("blocked reduction is independent of the thread count") {
  const int n = 100000;
  auto term = [](int k) { return std::sin(0.37 * k) * 1e-3 + 1.0 / (k + 1.0); };
  const int save = par::max_threads();
  par::set_threads(1);
  const double s1 = par::sum_n(n, term);
  par::set_threads(3);
  const double s3 = par::sum_n(n, term);
  par::set_threads(save);
  CHECK(s1 == s3);  // bitwise: block partials fold in index order
}

TEST_CASE("field kernels are independent of the thread count") {
  const Grid g = make_annulus(1.0, 2.0, 24, 48);
  const ScalarField f = gen_test_function(23, g, TestFnKind::LowFourierPositive);
  const int save = par::max_threads();
  par::set_threads(1);
  const ScalarField l1 = laplacian(f);
  const HessField h1 = hessian(f);
  par::set_threads(4);
  const ScalarField l4 = laplacian(f);
  const HessField h4 = hessian(f);
  par::set_threads(save);
  CHECK(l1.v == l4.v);
  CHECK(h1.h01 == h4.h01);
}
