#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>

#include "blochform/bloch_model.hpp"
#include "blochform/cubic_roots.hpp"
#include "blochform/errors.hpp"
#include "blochform/regime_map.hpp"
#include "oracles.hpp"
#include "sampling.hpp"

using namespace blochform;
using blochform::testing::Sampler;
using doctest::Approx;

namespace {

int sign_changes(const std::vector<double>& xs) {
  int n = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) n += (xs[i - 1] < 0.0) != (xs[i] < 0.0);
  return n;
}

// positive real beta-roots of h(alpha, .) from the companion matrix
std::vector<double> beta_zeros(double alpha) {
  const RealCubic h{3.0 * alpha - 0.25, alpha * (3.0 * alpha - 5.0), alpha * (alpha + 1.0) * (alpha + 1.0)};
  std::vector<double> out;
  for (auto z : blochform::testing::companion_roots(h)) {
    if (std::abs(z.imag()) < 1e-9 && z.real() > 0.0) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Regime expected_regime(RootTag tag) {
  switch (tag) {
    case RootTag::ComplexPair: return Regime::Torrey;
    case RootTag::ThreeDistinctReal: return Regime::DistinctReal;
    case RootTag::DoubleReal: return Regime::DoubleRoot;
    case RootTag::TripleReal: return Regime::TripleRoot;
  }
  return Regime::Torrey;
}

}  // namespace

TEST_CASE("h and its discriminant") {
  CHECK(std::abs(h_function(1.0 / 27, 8.0 / 27)) < 1e-16);
  CHECK(h_function(0.0, 0.25) == 0.0);
  for (double a : {0.0, 0.3, 2.0}) CHECK(h_function(a, 0.0) == Approx(a * (a + 1) * (a + 1)));
  CHECK(h_function(0.0, 1.0 / 9) == Approx(-5.0 / 2916).epsilon(1e-13));

  CHECK(h_discriminant(1.0 / 27) == Approx(0.0).scale(1.0).epsilon(1e-18));
  CHECK(h_discriminant(0.0) == 0.0);
  CHECK(h_discriminant(0.02) == Approx(1.2167e-4).epsilon(1e-10));
  CHECK(h_discriminant(0.05) == Approx(-1.33984375e-4).epsilon(1e-12));

  // d_h is the discriminant of h as a cubic in beta
  for (double a : {0.005, 0.02, 0.03, 0.05, 0.2}) {
    const RealCubic h{3.0 * a - 0.25, a * (3.0 * a - 5.0), a * (a + 1.0) * (a + 1.0)};
    CHECK(discriminant(h) == Approx(h_discriminant(a)).epsilon(1e-9));
  }
}

TEST_CASE("classify_regime") {
  CHECK(classify_regime(1.0 / 27, 8.0 / 27).regime == Regime::TripleRoot);
  for (double b : {0.0, 0.1, 8.0 / 27, 1.0, 50.0}) CHECK(classify_regime(0.05, b).regime == Regime::Torrey);
  CHECK(classify_regime(0.0, 1.0 / 9).regime == Regime::DistinctReal);
  CHECK(classify_regime(0.0, 0.25).regime == Regime::DoubleRoot);
  CHECK(classify_regime(0.01, 0.16).dc == Approx(h_function(0.01, 0.16) / 27));
  CHECK_THROWS_AS(classify_regime(-0.1, 0.2), InputError);
  CHECK_THROWS_AS(classify_regime(0.1, -0.2), InputError);

  const RegimePoint sc = classify_regime(BlochParams{1.0, 1.0, 0.5, 1.0, -1.0, false});
  CHECK(sc.strong_collision);
  CHECK(sc.regime == Regime::Torrey);
  CHECK(std::isnan(sc.alpha));
}

TEST_CASE("classify_regime agrees with classify_roots") {
  Sampler rng(42);
  int compared = 0;
  for (int i = 0; i < 10000; ++i) {
    BlochParams p = rng.params();
    if (i % 2 == 0) {
      // bias half the draws into the unorthodox lobe
      p = from_dimensionless(p.gamma, p.gamma_t, rng.uniform(0.0, 0.04), rng.uniform(0.0, 0.32), -1.0);
    }
    if (p.gamma == p.gamma_t) continue;
    const RegimePoint rp = classify_regime(p);
    // inside the coefficient rounding band the sign of Dc is not resolvable and
    // classify_roots reports a double root by design
    const RealCubic c = characteristic_poly(p);
    const CardanoQuantities cq = cardano_quantities(c);
    if (std::abs(cq.Dc) <= dc_tolerance(c, cq.Q, cq.R)) continue;
    ++compared;
    CAPTURE(p.gamma);
    CAPTURE(p.gamma_t);
    CAPTURE(p.delta);
    CAPTURE(p.omega);
    CAPTURE(h_function(rp.alpha, rp.beta));
    REQUIRE(rp.regime == expected_regime(classify_roots(characteristic_poly(p)).tag));
  }
  CHECK(compared > 9000);

  // exact boundary points
  const BlochParams res{0.4, 0.1, 0.0, 0.15, -1.0, false};
  CHECK(classify_regime(res).regime == Regime::DoubleRoot);
  CHECK(classify_roots(characteristic_poly(res)).tag == RootTag::DoubleReal);
}

TEST_CASE("regime theorem: alpha > 1/27 is always Torrey") {
  Sampler rng(2718);
  for (int i = 0; i < 100000; ++i) {
    const double a = rng.uniform(1.0 / 27 + 1e-6, 10.0);
    const double b = rng.uniform(0.0, 100.0);
    REQUIRE(h_function(a, b) > 0.0);
    REQUIRE(classify_regime(a, b).regime == Regime::Torrey);
  }
}

TEST_CASE("boundary_alpha") {
  for (auto br : {BoundaryBranch::OriginToCusp, BoundaryBranch::CuspToQuarter}) {
    CHECK(boundary_alpha(8.0 / 27, br).alpha == Approx(1.0 / 27).epsilon(1e-12));
  }
  CHECK(std::abs(boundary_alpha(0.25, BoundaryBranch::CuspToQuarter).alpha) < 1e-12);
  CHECK(boundary_alpha(0.2, BoundaryBranch::OriginToCusp).alpha == Approx(0.01299).epsilon(1e-3));
  CHECK(boundary_alpha(0.0, BoundaryBranch::OriginToCusp).alpha == 0.0);
  CHECK_THROWS_AS(boundary_alpha(0.2, BoundaryBranch::CuspToQuarter), InputError);
  CHECK_THROWS_AS(boundary_alpha(0.31, BoundaryBranch::OriginToCusp), InputError);

  for (const auto& pt : boundary_curve(400)) {
    REQUIRE(std::abs(h_function(pt.alpha, pt.beta)) <= 1e-9);
    REQUIRE(pt.alpha >= 0.0);
    REQUIRE(pt.alpha <= 1.0 / 27 + 1e-15);
  }
}

TEST_CASE("boundary inverts the beta-zeros of h") {
  for (int k = 1; k < 200; ++k) {
    const double a = 1e-4 + (1.0 / 27 - 2e-4) * k / 200.0;
    const auto z = beta_zeros(a);
    REQUIRE(z.size() == 2);
    REQUIRE(z[0] < z[1]);
    CHECK(boundary_alpha(z[0], BoundaryBranch::OriginToCusp).alpha == Approx(a).epsilon(1e-8));
    CHECK(boundary_alpha(z[1], BoundaryBranch::CuspToQuarter).alpha == Approx(a).epsilon(1e-8));
  }
}

TEST_CASE("monotonicity along the boundary") {
  const auto curve = boundary_curve(1000);
  REQUIRE(curve.front().beta == 0.0);
  const auto cusp = std::find_if(curve.begin(), curve.end(), [](const BoundaryPoint& p) { return p.beta == 8.0 / 27; });
  REQUIRE(cusp != curve.end());
  CHECK(curve.back().beta == 0.25);
  CHECK(curve.back().branch == BoundaryBranch::CuspToQuarter);
  CHECK(curve.front().beta - 2 * curve.front().alpha == 0.0);
  CHECK(cusp->beta - 2 * cusp->alpha == Approx(6.0 / 27).epsilon(1e-12));
  CHECK(curve.back().beta - 2 * curve.back().alpha == Approx(0.25).epsilon(1e-12));

  double prev_key = -1.0;
  double prev_root = 0.0;
  const double g = 0.4, gt = 0.1;
  for (const auto& pt : curve) {
    const double key = pt.beta - 2 * pt.alpha;
    REQUIRE(key > prev_key);
    prev_key = key;
    // the double root: midpoint of the closest pair of cubic roots
    const auto r = classify_roots(characteristic_poly(from_dimensionless(g, gt, pt.alpha, pt.beta, -1.0))).roots();
    double best = INFINITY, mid = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(r[i] - r[j]) < best) {
          best = std::abs(r[i] - r[j]);
          mid = 0.5 * (r[i] + r[j]).real();
        }
    if (&pt != &curve.front()) REQUIRE(mid < prev_root + 1e-12);
    prev_root = mid;
  }
  CHECK(prev_root == Approx(-(g + gt) / 2).epsilon(1e-6));
}

TEST_CASE("grid scans") {
  const auto corners = scan_grid({0.0, 1.0 / 27, 2}, {0.0, 8.0 / 27, 2});
  REQUIRE(corners.size() == 4);
  CHECK(corners[0].regime == Regime::DoubleRoot);
  CHECK(corners[1].regime == Regime::Torrey);
  CHECK(corners[2].regime == Regime::Torrey);
  CHECK(corners[3].regime == Regime::TripleRoot);

  // alpha is the slow index, so the first 300 points are the alpha = 0 column
  const auto column = scan_grid({0.0, 0.0, 2}, {1e-3, 0.3, 300});
  std::vector<double> along_beta;
  for (std::size_t k = 0; k < 300; ++k) along_beta.push_back(h_function(column[k].alpha, column[k].beta));
  CHECK(sign_changes(along_beta) == 1);

  // a degenerate beta axis {0.2, 0.2} yields each alpha twice; keep one
  const auto row = scan_grid({0.0, 0.04, 401}, {0.2, 0.2, 2});
  std::vector<double> along_alpha;
  for (std::size_t k = 0; k < row.size(); k += 2) along_alpha.push_back(h_function(row[k].alpha, row[k].beta));
  CHECK(along_alpha.size() == 401);
  CHECK(sign_changes(along_alpha) == 1);

  std::vector<double> fixed_alpha;
  for (int k = 0; k <= 400; ++k) fixed_alpha.push_back(h_function(0.02, 0.4 * k / 400.0));
  CHECK(sign_changes(fixed_alpha) == 2);

  const auto diag = scan_grid({0.0, 0.05, 3}, {-0.1, 0.1, 3});
  CHECK(diag[0].diagnostic);
  CHECK_FALSE(diag[2].diagnostic);
  CHECK_THROWS_AS(scan_grid({0.0, 0.05, 1}, {0.0, 0.3, 5}), InputError);
}

TEST_CASE("the unorthodox region is a single lobe below the cusp") {
  // Each alpha-row of the 50x50 map must hold exactly the cells strictly
  // between the two beta-zeros of h, an interval that shrinks continuously to
  // the cusp. Near the cusp the lobe is thinner than a grid cell, so a
  // neighbour-count of the sampled cells would split off the tip.
  constexpr std::size_t n = 50;
  const auto grid = scan_grid({0.0, 0.05, n}, {0.0, 0.3, n});
  std::size_t lobe_cells = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double alpha = grid[i * n].alpha;
    const auto z = beta_zeros(alpha);
    for (std::size_t j = 0; j < n; ++j) {
      const RegimePoint& pt = grid[i * n + j];
      const bool inside = alpha < 1.0 / 27 && z.size() == 2 && pt.beta > z[0] && pt.beta < z[1];
      CAPTURE(alpha);
      CAPTURE(pt.beta);
      if (std::abs(h_function(pt.alpha, pt.beta)) > 1e-9) REQUIRE((pt.regime == Regime::DistinctReal) == inside);
      lobe_cells += pt.regime == Regime::DistinctReal;
    }
  }
  // alpha = 0 row: h = beta^2 (beta - 1/4)
  for (std::size_t j = 1; j < n; ++j) {
    CHECK((grid[j].regime == Regime::DistinctReal) == (grid[j].beta < 0.25));
  }
  CHECK(lobe_cells > 0);
}
