#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "sobc/errors.hpp"
#include "sobc/search.hpp"

using namespace sobc;

namespace {

double total_bound(const ChannelScenario2& s, CloudUser cloud, double alpha, const ReliabilityAllocation& a) {
  const RateConstraintSet2 b = sup_constraints(s, SupParams{cloud, alpha, 0.0, a.eps_sat, a.eps_cc_strong, a.eps_weak});
  return b.cc + b.sat + b.sum;
}

}  // namespace

TEST_CASE("reliability optimizer beats a brute-force grid") {
  const ChannelScenario2 s(15, 10, 100, ErrorModel::global(0.5));
  const double alpha = 0.3;
  auto obj = [&](const ReliabilityAllocation& a) { return total_bound(s, CloudUser::User2, alpha, a); };
  const ReliabilityOptimum best = optimize_reliability(obj, s, CloudUser::User2, alpha, SearchOptions{});
  REQUIRE(best.feasible);

  double brute = -1.0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      for (int k = 0; k < 100; ++k) {
        const ReliabilityAllocation a{0.5 * i / 99.0, 0.5 * j / 99.0, 0.5 * k / 99.0};
        const SupParams p{CloudUser::User2, alpha, 0.0, a.eps_sat, a.eps_cc_strong, a.eps_weak};
        if (!reliability_feasible(s, p).feasible) continue;
        brute = std::max(brute, obj(a));
      }
    }
  }
  CHECK(best.value >= brute - 1e-9);
  CHECK(best.value <= brute + 0.001);
  const SupParams p{CloudUser::User2, alpha, 0.0, best.alloc.eps_sat, best.alloc.eps_cc_strong, best.alloc.eps_weak};
  CHECK(reliability_feasible(s, p).feasible);
  CHECK(best.value == doctest::Approx(obj(best.alloc)));
}

TEST_CASE("reliability optimizer respects per-user caps") {
  const ChannelScenario2 s(35, 30, 100, ErrorModel::per_user(1e-5, 0.1));
  auto obj = [&](const ReliabilityAllocation& a) { return total_bound(s, CloudUser::User1, 0.4, a); };
  const ReliabilityOptimum best = optimize_reliability(obj, s, CloudUser::User1, 0.4, SearchOptions{});
  REQUIRE(best.feasible);
  // user 1 is in the cloud, so eps2 gets user 1's cap
  CHECK(best.alloc.eps_weak <= 1e-5);
  CHECK(best.alloc.eps_weak == doctest::Approx(1e-5).epsilon(1e-3));
  CHECK(best.alloc.eps_sat <= 0.1);
  CHECK(best.alloc.eps_cc_strong <= 0.1);

  auto never = [](const ReliabilityAllocation&) { return -std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(optimize_reliability(never, s, CloudUser::User1, 0.4, SearchOptions{}), InfeasibleError);
}

TEST_CASE("boundary dispatch") {
  const ChannelScenario2 s(15, 10, 100, ErrorModel::global(1e-3));
  SearchOptions o;
  o.alpha_grid = 16;
  o.beta_interior = 4;
  o.tdm_grid = 16;
  const std::vector<double> grid = default_r2_grid(s, 6);
  for (Scheme sc : {Scheme::Sup, Scheme::SupNoRs, Scheme::Ccp, Scheme::Tdm, Scheme::Converse}) {
    const RegionBoundary b = trace_boundary(sc, s, grid, o);
    CHECK(b.scheme == sc);
    CHECK_FALSE(b.points.empty());
  }
  CHECK(trace_boundary(Scheme::Sup, s, grid, o).points.back().r1 == boundary_sup(s, grid, o).points.back().r1);
}

TEST_CASE("labels") {
  CHECK(label_name(SchemeLabel::None) == "NONE");
  CHECK(label_name(SchemeLabel::SupNoRs) == "SUPNORS");
  CHECK(label_name(SchemeLabel::Sup) == "SUP");
  CHECK(label_name(SchemeLabel::Ccp) == "CCP");
  CHECK(label_name(SchemeLabel::Sup1) == "SUP-1");
  CHECK(label_name(SchemeLabel::Sup2) == "SUP-2");
}

TEST_CASE("classification of single cells") {
  ClassifyOptions o;
  o.model = ErrorModel::global(0.1);
  CHECK(classify_cell(10, 10, o) == SchemeLabel::Ccp);
  CHECK(classify_cell(50, 2, o) == SchemeLabel::None);
  CHECK(classify_cell(20, 10, o) == SchemeLabel::Sup);
  CHECK(classify_cell(10, 20, o) == SchemeLabel::Sup);
  // nothing clears the floor
  o.n = 10;
  CHECK(classify_cell(0.05, 0.05, o) == SchemeLabel::None);

  ClassifyOptions p;
  p.model = ErrorModel::per_user(1e-5, 0.1);
  p.n = 100;
  CHECK(classify_cell(35, 30, p) == SchemeLabel::Sup1);
  CHECK(classify_cell(2, 50, p) == SchemeLabel::None);
  p.n = 5000;
  CHECK(classify_cell(35, 30, p) == SchemeLabel::Sup2);
}

TEST_CASE("classification maps") {
  ClassifyOptions o;
  o.model = ErrorModel::global(0.1);
  o.r2_points = 12;
  o.search.threads = 2;
  const std::vector<double> g = {2, 8, 14, 30};
  const SchemeClassification m = classify_schemes(g, g, o);
  REQUIRE(m.cells.size() == 16);
  CHECK(m.symmetric);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(m.cells[i * 4 + j].gamma1 == g[i]);
      CHECK(m.cells[i * 4 + j].label == m.cells[j * 4 + i].label);
    }
  }
  o.search.threads = 1;
  const SchemeClassification again = classify_schemes(g, g, o);
  for (std::size_t i = 0; i < 16; ++i) CHECK(again.cells[i].label == m.cells[i].label);

  CHECK_THROWS_AS(classify_schemes({}, g, o), DomainError);
  CHECK_THROWS_AS(classify_schemes(std::vector<double>(201, 1.0), g, o), UnsupportedError);
  o.model = ErrorModel::per_user(0.1, 0.1);
  CHECK_FALSE(classify_schemes({3}, {4}, o).symmetric);
}
