#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "sobc/errors.hpp"
#include "sobc/itcore.hpp"
#include "sobc/regions2.hpp"

using namespace sobc;

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / double(count - 1));
  return out;
}

SearchOptions light() {
  SearchOptions o;
  o.alpha_grid = 32;
  o.beta_interior = 6;
  o.tdm_grid = 24;
  return o;
}

// every point of `inner` lies on or below `outer` at the same R2
void check_below(const RegionBoundary& inner, const RegionBoundary& outer, double slack) {
  for (const BoundaryPoint& p : inner.points) {
    const auto o = outer.r1_at(p.r2);
    REQUIRE(o.has_value());
    CHECK(p.r1 <= *o + slack);
  }
}

double segment_distance(double x, double y, std::pair<double, double> a, std::pair<double, double> b) {
  const double dx = b.first - a.first;
  const double dy = b.second - a.second;
  const double len2 = dx * dx + dy * dy;
  const double t = len2 > 0 ? std::clamp(((x - a.first) * dx + (y - a.second) * dy) / len2, 0.0, 1.0) : 0.0;
  return std::hypot(a.first + t * dx - x, a.second + t * dy - y);
}

}  // namespace

TEST_CASE("model and scenario validation") {
  CHECK_THROWS_AS(ErrorModel::global(0.0), DomainError);
  CHECK_THROWS_AS(ErrorModel::global(1.0), DomainError);
  CHECK_THROWS_AS(ErrorModel::per_user(1e-3, 1.2), DomainError);
  CHECK_THROWS_AS(ErrorModel::per_user(1e-3, 0.1).global_eps(), DomainError);
  CHECK_THROWS_AS(ChannelScenario2(-1.0, 2.0, 100, ErrorModel::global(0.1)), DomainError);
  CHECK_THROWS_AS(ChannelScenario2(1.0, 2.0, 0, ErrorModel::global(0.1)), DomainError);
  const ChannelScenario2 s(15, 10, 100, ErrorModel::global(1e-5));
  CHECK_THROWS_AS(s.gamma(3), DomainError);
  CHECK_THROWS_AS(boundary_ccp(s, {}), DomainError);
  CHECK_THROWS_AS(boundary_ccp(s, {0.2, 0.1}), DomainError);
  CHECK_THROWS_AS(boundary_ccp(s, {-0.1}), DomainError);
  CHECK_THROWS_AS(sup_solve(s, CloudUser::User2, 1.5, 0.0, 0.1), DomainError);
  SearchOptions bad;
  bad.alpha_grid = 1;
  CHECK_THROWS_AS(boundary_sup(s, {0.1}, bad), DomainError);
  CHECK_THROWS_AS(peruser_union_boundary(s, {0.1}, light()), DomainError);
}

TEST_CASE("ordering and names") {
  CHECK(capacity_ordering(ChannelScenario2(15, 10, 100, ErrorModel::global(0.1))) == CloudUser::User2);
  CHECK(capacity_ordering(ChannelScenario2(5, 10, 100, ErrorModel::global(0.1))) == CloudUser::User1);
  CHECK(capacity_ordering(ChannelScenario2(7, 7, 100, ErrorModel::global(0.1))) == CloudUser::User2);
  for (Scheme sc : {Scheme::Sup, Scheme::SupNoRs, Scheme::Ccp, Scheme::Tdm, Scheme::Converse}) {
    CHECK(scheme_from_name(scheme_name(sc)) == sc);
  }
  CHECK_FALSE(scheme_from_name("sup").has_value());
}

TEST_CASE("superposition bounds at a fixed point") {
  const ChannelScenario2 s(15, 10, 100, ErrorModel::global(1e-5));
  const SupParams p{CloudUser::User2, 0.5, 0.0, 1e-5, 1e-5, 1e-5};
  const RateConstraintSet2 b = sup_constraints(s, p);
  CHECK(b.cc == doctest::Approx(0.18792535148422784).epsilon(1e-12));
  CHECK(b.sat == doctest::Approx(0.77055404611314926).epsilon(1e-12));
  CHECK(b.sum == doctest::Approx(1.0853106277021571).epsilon(1e-12));

  const RateConstraintSet2 shifted = sup_constraints(s, p, 0.05);
  CHECK(shifted.cc == doctest::Approx(b.cc - 0.05));
  CHECK(shifted.sum == doctest::Approx(b.sum - 0.05));
  CHECK(shifted.sat == b.sat);

  const RatePair rp = sup_rate_pair(s, p);
  REQUIRE(rp.feasible);
  CHECK(rp.r2 == doctest::Approx(b.cc));
  CHECK(rp.r1 == doctest::Approx(std::min(b.sat, b.sum - b.cc)));
  CHECK_FALSE(sup_rate_pair(s, p, b.cc + 0.01).feasible);

  // zero error on a layer sends that bound to zero
  const RateConstraintSet2 z = sup_constraints(s, SupParams{CloudUser::User2, 0.5, 0.0, 0.0, 1e-5, 1e-5});
  CHECK(z.sat == 0.0);
}

TEST_CASE("SUPnoRS against an independent oracle") {
  // scipy quadrature + bisection over the error split, 401-point alpha scan plus bounded refinement
  const ChannelScenario2 g(15, 10, 100, ErrorModel::global(1e-5));
  const RegionBoundary b = boundary_supnors(g, {0.2, 0.5}, SearchOptions{});
  REQUIRE(b.points.size() == 2);
  CHECK(b.points[0].r1 == doctest::Approx(0.7381271152899165).epsilon(1e-8));
  CHECK(b.points[1].r1 == doctest::Approx(0.31348555562248265).epsilon(1e-8));
  CHECK(b.points[0].sup->alpha == doctest::Approx(0.47149).epsilon(1e-3));

  const ChannelScenario2 pu(35, 30, 100, ErrorModel::per_user(1e-5, 0.1));
  const RegionBoundary c = boundary_supnors(pu, {0.3, 0.8}, SearchOptions{}, CloudUser::User2);
  REQUIRE(c.points.size() == 2);
  CHECK(c.points[0].r1 == doctest::Approx(1.16659241).epsilon(1e-7));
  CHECK(c.points[1].r1 == doctest::Approx(0.63658752).epsilon(1e-7));

  const ChannelScenario2 pu5(35, 30, 5000, ErrorModel::per_user(1e-5, 0.1));
  const RegionBoundary d = boundary_supnors(pu5, {0.3, 0.8}, SearchOptions{}, CloudUser::User2);
  REQUIRE(d.points.size() == 2);
  CHECK(d.points[0].r1 == doctest::Approx(1.44428098).epsilon(1e-7));
  CHECK(d.points[1].r1 == doctest::Approx(0.93385049).epsilon(1e-7));
}

TEST_CASE("reported parameters reproduce the boundary point") {
  const ChannelScenario2 s(15, 10, 100, ErrorModel::global(1e-5));
  const RegionBoundary b = boundary_supnors(s, linspace(0.05, 0.8, 6), SearchOptions{});
  for (const BoundaryPoint& p : b.points) {
    REQUIRE(p.sup.has_value());
    const ReliabilityCheck rc = reliability_feasible(s, *p.sup);
    CHECK(rc.feasible);
    const RateConstraintSet2 k = sup_constraints(s, *p.sup);
    CHECK(k.cc >= p.r2 - 1e-9);
    CHECK(k.sat >= p.r1 - 1e-9);
    CHECK(k.sum >= p.r1 + p.r2 - 1e-9);
  }
}

TEST_CASE("CCP against a grid scan") {
  for (double eps : {1e-5, 1e-3, 0.1}) {
    const ChannelScenario2 s(15, 10, 100, ErrorModel::global(eps));
    const CcpSolution c = ccp_solution(s);
    // (1 - e1)(1 - e2) = 1 - eps, e1 = eps * u on a log grid in u
    double best = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double e1 = eps * std::pow(10.0, -14.0 * (1.0 - i / 9999.0));
      const double e2 = 1.0 - (1.0 - eps) / (1.0 - e1);
      if (e2 <= 0.0) continue;
      best = std::max(best, std::min(kappa(100, 15, e1), kappa(100, 10, e2)));
    }
    CHECK(c.sum_rate >= best - 1e-12);
    CHECK(c.sum_rate <= best + 1e-6);
    CHECK((1.0 - c.eps1) * (1.0 - c.eps2) >= 1.0 - eps - 1e-15);
  }
  const ChannelScenario2 s(15, 10, 100, ErrorModel::global(1e-5));
  CHECK(ccp_sum_rate(s) == doctest::Approx(0.89862306862687857).epsilon(1e-12));

  const ChannelScenario2 pu(35, 30, 100, ErrorModel::per_user(1e-5, 0.1));
  CHECK(ccp_sum_rate(pu) == doctest::Approx(std::min(kappa(100, 35, 1e-5), kappa(100, 30, 0.1))));

  const RegionBoundary b = boundary_ccp(s, {0.0, 0.5, 1.0});
  REQUIRE(b.points.size() == 2);
  CHECK(b.points[1].r1 == doctest::Approx(ccp_sum_rate(s) - 0.5));
  CHECK(b.points[1].sup->beta == 1.0);
  CHECK(b.points[1].sup->alpha == 0.0);
}

TEST_CASE("endpoint at R2 = 0") {
  const ChannelScenario2 s(15, 10, 100, ErrorModel::global(1e-5));
  const double k1 = kappa(100, 15, 1e-5);
  CHECK(k1 == doctest::Approx(1.085311).epsilon(1e-6));
  CHECK(boundary_sup(s, {0.0}, light()).points.at(0).r1 == doctest::Approx(k1).epsilon(1e-7));
  CHECK(boundary_tdm(s, {0.0}, light()).points.at(0).r1 == doctest::Approx(k1).epsilon(1e-7));
  CHECK(boundary_converse(s, {0.0}).points.at(0).r1 == doctest::Approx(k1).epsilon(1e-12));
  CHECK(single_user_rate(s, 1) == doctest::Approx(k1));
  const auto grid = default_r2_grid(s, 5);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(kappa(100, 10, 1e-5)));
}

TEST_CASE("cut-set converse") {
  const ConverseRegion2 c = converse_region(ChannelScenario2(35, 30, 100, ErrorModel::per_user(1e-5, 0.1)));
  CHECK(c.r1 == doctest::Approx(1.490302519271584).epsilon(1e-12));
  CHECK(c.r2 == doctest::Approx(1.626421382751626).epsilon(1e-12));
  CHECK(c.sum == doctest::Approx(1.701179084346648).epsilon(1e-12));
  CHECK_FALSE(c.sum_vacuous);

  const ConverseRegion2 g = converse_region(ChannelScenario2(15, 10, 100, ErrorModel::global(0.3)));
  CHECK(g.sum == doctest::Approx(kappa(100, 15, 0.6)));
  const ConverseRegion2 v = converse_region(ChannelScenario2(15, 10, 100, ErrorModel::global(0.5)));
  CHECK(v.sum_vacuous);
  CHECK(std::isinf(v.sum));

  const RegionBoundary b = boundary_converse(ChannelScenario2(15, 10, 100, ErrorModel::global(1e-3)), {0.0, 0.4, 2.0});
  REQUIRE(b.points.size() == 2);
  CHECK(b.points[1].r1 <= b.points[0].r1);
}

TEST_CASE("inclusion on random scenarios") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> snr(1.0, 100.0);
  const std::int64_t ns[] = {100, 512, 5000};
  for (int trial = 0; trial < 3; ++trial) {
    const ChannelScenario2 s(snr(rng), snr(rng), ns[trial], ErrorModel::global(trial % 2 ? 1e-3 : 1e-5));
    const auto grid = default_r2_grid(s, 8);
    const RegionBoundary nors = boundary_supnors(s, grid, light());
    const RegionBoundary sup = boundary_sup(s, grid, light());
    const RegionBoundary tdm = boundary_tdm(s, grid, light());
    const RegionBoundary conv = boundary_converse(s, grid);
    check_below(nors, sup, 1e-6);
    check_below(sup, conv, 1e-6);
    check_below(tdm, conv, 1e-6);
    check_below(boundary_ccp(s, grid), sup, 1e-6);
  }
}

TEST_CASE("boundaries are non-increasing in R2") {
  const ChannelScenario2 s(40, 10, 100, ErrorModel::global(1e-5));
  const auto grid = default_r2_grid(s, 16);
  for (const RegionBoundary& b : {boundary_sup(s, grid, light()), boundary_tdm(s, grid, light())}) {
    for (std::size_t i = 1; i < b.points.size(); ++i) CHECK(b.points[i].r1 <= b.points[i - 1].r1 + 1e-7);
  }
}

TEST_CASE("per-user caps at eps contain the global region") {
  const ChannelScenario2 g(20, 8, 200, ErrorModel::global(1e-3));
  const ChannelScenario2 p(20, 8, 200, ErrorModel::per_user(1e-3, 1e-3));
  const auto grid = default_r2_grid(g, 8);
  check_below(boundary_supnors(g, grid, light()), boundary_supnors(p, grid, light(), CloudUser::User2), 1e-9);
  check_below(boundary_sup(g, grid, light()), peruser_union_boundary(p, grid, light()), 1e-9);
}

TEST_CASE("ordering flip under per-user errors") {
  const auto flip = [](std::int64_t n) {
    const ChannelScenario2 s(35, 30, n, ErrorModel::per_user(1e-5, 0.1));
    const auto grid = linspace(0.0, 0.95 * std::min(single_user_rate(s, 1), single_user_rate(s, 2)), 10);
    const RegionBoundary one = boundary_sup(s, grid, light(), CloudUser::User1);
    const RegionBoundary two = boundary_sup(s, grid, light(), CloudUser::User2);
    int one_wins = 0;
    int two_wins = 0;
    for (double r2 : grid) {
      const double a = one.r1_at(r2).value_or(-1.0);
      const double b = two.r1_at(r2).value_or(-1.0);
      if (a > b + 1e-9) ++one_wins;
      if (b > a + 1e-9) ++two_wins;
    }
    return std::pair{one_wins, two_wins};
  };
  const auto [a100, b100] = flip(100);
  CHECK(a100 > 0);
  CHECK(b100 == 0);
  const auto [a5k, b5k] = flip(5000);
  CHECK(a5k == 0);
  CHECK(b5k > 0);
}

TEST_CASE("large blocklength approaches the capacity boundary") {
  const ChannelScenario2 s(15, 10, 10000000, ErrorModel::global(1e-3));
  const auto grid = default_r2_grid(s, 60);
  const RegionBoundary b = boundary_supnors(s, grid, light());
  REQUIRE(b.points.size() >= 50);
  for (double a : linspace(0.0, 1.0, 20)) {
    const double c1 = capacity(a * 15);
    const double c2 = 0.5 * std::log1p((1 - a) * 10 / (1 + a * 10));
    std::vector<std::pair<double, double>> poly;
    for (const BoundaryPoint& q : b.points) poly.emplace_back(q.r2, q.r1);
    poly.emplace_back(b.points.back().r2, 0.0);
    double dist = 1e9;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
      dist = std::min(dist, segment_distance(c2, c1, poly[i], poly[i + 1]));
    }
    CHECK(dist < 5e-3);
  }
}

TEST_CASE("TDM solver") {
  const ChannelScenario2 s(15, 10, 100, ErrorModel::global(1e-3));
  CHECK_FALSE(tdm_solve(s, 0.0, 0.0, 0.1).feasible);
  const TdmSolution t = tdm_solve(s, 0.5, 0.5, 0.1);
  REQUIRE(t.feasible);
  CHECK(t.params.alpha2 == doctest::Approx(1.0));
  CHECK(t.params.alpha1 == doctest::Approx(1.0));
  CHECK(t.r1 > 0.0);
  CHECK((1 - t.params.eps1) * (1 - t.params.eps2) >= 1 - 1e-3 - 1e-12);
}

TEST_CASE("looser global error gives a larger region") {
  const ChannelScenario2 tight(15, 10, 100, ErrorModel::global(1e-5));
  const ChannelScenario2 loose(15, 10, 100, ErrorModel::global(1e-3));
  const auto grid = default_r2_grid(tight, 10);
  check_below(boundary_sup(tight, grid, light()), boundary_sup(loose, grid, light()), 1e-9);
  check_below(boundary_tdm(tight, grid, light()), boundary_tdm(loose, grid, light()), 1e-9);
  check_below(boundary_converse(tight, grid), boundary_converse(loose, grid), 0.0);
}

TEST_CASE("parameter traces") {
  // beta switches once, and the switch happens at a smaller alpha for a stronger user 1
  auto switch_alpha = [](double g1) {
    const ChannelScenario2 s(g1, 10, 100, ErrorModel::global(1e-5));
    const RegionBoundary b = boundary_sup(s, default_r2_grid(s, 30), SearchOptions{});
    int switches = 0;
    double alpha = -1.0;
    for (std::size_t i = 1; i < b.points.size(); ++i) {
      if (b.points[i].sup->beta != b.points[i - 1].sup->beta && b.points[i].r1 > 0.0) {
        ++switches;
        alpha = b.points[i - 1].sup->alpha;
      }
      if (b.points[i].sup->beta == 0.0 && b.points[i].r1 > 0.0) {
        CHECK(b.points[i].sup->eps_cc_strong < 0.1 * b.points[i].sup->eps_sat);
      }
    }
    CHECK(switches == 1);
    return alpha;
  };
  const double a15 = switch_alpha(15);
  const double a40 = switch_alpha(40);
  CHECK(a40 < a15);
}
