// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sobc/itcore.hpp"
#include "sobc/regions2.hpp"
#include "sobc/regionsK.hpp"
#include "sobc/search.hpp"
#include "sobc/specfun.hpp"

using namespace sobc;
namespace fs = std::filesystem;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInfZ = std::numeric_limits<double>::infinity();

struct Outcome {
  bool ok = true;
  std::string note;
};

void fail(Outcome& o, const std::string& why) {
  if (o.ok) o.note = why;
  o.ok = false;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / double(n - 1);
  return v;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, i / double(n - 1));
  return v;
}

double r1_or(const RegionBoundary& b, double r2) { return b.r1_at(r2).value_or(kNegInf); }

std::size_t threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

Outcome special_functions() {
  Outcome o;
  const std::vector<double> grid = {-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  const std::vector<double> rhos = {-0.9, -0.5, 0.0, 0.5, 0.9};
  constexpr long kSamples = 10000000;
  std::mt19937_64 rng(987654321);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (double r : rhos) {
    std::vector<long> hist(100, 0);
    const double c = std::sqrt(1.0 - r * r);
    for (long s = 0; s < kSamples; ++s) {
      const double a = gauss(rng);
      const double b = r * a + c * gauss(rng);
      ++hist[(std::lower_bound(grid.begin(), grid.end(), a) - grid.begin()) * 10 +
             (std::lower_bound(grid.begin(), grid.end(), b) - grid.begin())];
    }
    for (std::size_t i = 0; i < 9; ++i) {
      for (std::size_t j = 0; j < 9; ++j) {
        long count = 0;
        for (std::size_t a = 0; a <= i; ++a)
          for (std::size_t b = 0; b <= j; ++b) count += hist[a * 10 + b];
        const double p = double(count) / kSamples;
        // standard error under the hypothesis that bvn_cdf is right
        const double v = specfun::bvn_cdf(grid[i], grid[j], specfun::Correlation(r));
        const double se = std::sqrt(v * (1.0 - v) / kSamples);
        const double z = se > 0 ? std::fabs(v - p) / se : (v == p ? 0.0 : kInfZ);
        worst = std::max(worst, z);
        if (z > 4.0) fail(o, fmt("bvn off by %.2f SE at h=%g", z, grid[i]));
      }
    }
  }
  // bisection on erfc
  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(mid / std::sqrt(2.0)) > 1e-5 ? lo : hi) = mid;
  }
  const double q = specfun::q_inv(1e-5);
  if (std::fabs(q - 4.2648908) > 1e-6 || std::fabs(q - lo) > 1e-6) fail(o, fmt("q_inv(1e-5)=%.10f", q));
  if (o.ok) o.note = fmt("worst bvn deviation %.2f SE, q_inv(1e-5)=%.9f", worst, q);
  return o;
}

Outcome f_closed_forms() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double e0 = unit(rng), e1 = unit(rng);
    worst = std::max({worst, std::fabs(correct_decode_F(e0, e1, 1.0) - (1.0 - std::max(e0, e1))),
                      std::fabs(correct_decode_F(e0, e1, 0.0) - (1.0 - e0) * (1.0 - e1)),
                      std::fabs(correct_decode_F(e0, e1, -1.0) - std::max(0.0, 1.0 - e0 - e1))});
  }
  if (worst > 1e-9) fail(o, fmt("closed forms off by %.3g", worst));
  for (double e0 : {1e-6, 1e-3, 0.05, 0.3, 0.7}) {
    for (double e1 : {1e-7, 1e-2, 0.2, 0.6}) {
      double prev = -1.0;
      for (double r : linspace(-1.0, 1.0, 201)) {
        const double f = correct_decode_F(e0, e1, r);
        if (f < prev - 1e-14) fail(o, fmt("F decreases at r=%g (eps %g, %g)", r, e0, e1));
        prev = f;
      }
    }
  }
  if (o.ok) o.note = fmt("max closed-form error %.3g over 1000 pairs, monotone in r", worst);
  return o;
}

Outcome dispersion_identities() {
  Outcome o;
  double worst = 0.0;
  const auto g = log_grid(1e-3, 1e3, 100);
  for (double x : g) {
    for (double y : g) {
      if (x > y) continue;
      const double f = cloud_dispersion(x, y);
      worst = std::max(worst, std::fabs(f - (dispersion(x) + dispersion(y) - 2.0 * cross_dispersion(x, y))));
      const double z = (y - x) / (1.0 + x);
      const double lower = std::pow(std::sqrt(dispersion(y)) - std::sqrt(dispersion(x)), 2);
      if (f < lower - 1e-15 || f > dispersion(z) + 1e-15) fail(o, fmt("sandwich broken at x=%g y=%g", x, y));
    }
  }
  if (worst > 1e-12) fail(o, fmt("forms differ by %.3g", worst));
  if (o.ok) o.note = fmt("forms agree to %.2g, sandwich holds on 100x100", worst);
  return o;
}

Outcome ordering_flip() {
  Outcome o;
  const double k30 = kappa(100, 30, 0.1), k35 = kappa(100, 35, 1e-5), k35b = kappa(5000, 35, 1e-5);
  if (std::fabs(k30 - 1.6262) > 1e-3) fail(o, fmt("kappa(100,30,0.1)=%.6f", k30));
  if (std::fabs(k35 - 1.4903) > 1e-3) fail(o, fmt("kappa(100,35,1e-5)=%.6f", k35));
  if (std::fabs(k35b - 1.7491) > 1e-3) fail(o, fmt("kappa(5000,35,1e-5)=%.6f", k35b));
  if (!(k30 - k35 > 0)) fail(o, "kappa gap not positive at n=100");
  if (!(kappa(5000, 30, 0.1) - k35b < 0)) fail(o, "kappa gap not negative at n=5000");

  SearchOptions opts;
  opts.threads = threads();
  for (std::int64_t n : {100, 5000}) {
    const ChannelScenario2 s(35, 30, n, ErrorModel::per_user(1e-5, 0.1));
    const auto grid = linspace(0.0, 0.95 * std::min(single_user_rate(s, 1), single_user_rate(s, 2)), 20);
    const RegionBoundary one = boundary_sup(s, grid, opts, CloudUser::User1);
    const RegionBoundary two = boundary_sup(s, grid, opts, CloudUser::User2);
    const RegionBoundary& top = n == 100 ? one : two;
    const RegionBoundary& bottom = n == 100 ? two : one;
    int strict = 0;
    for (double r2 : grid) {
      const double a = r1_or(top, r2), b = r1_or(bottom, r2);
      if (a < b - 1e-9) fail(o, fmt("n=%g: dominance broken at R2=%g", double(n), r2));
      if (a > b + 1e-9) ++strict;
    }
    if (strict == 0) fail(o, fmt("n=%g: orderings coincide", double(n)));
  }
  if (o.ok) o.note = fmt("kappa %.4f %.4f %.4f, SUP-1 above at n=100, SUP-2 above at n=5000", k30, k35, k35b);
  return o;
}

Outcome beta_interior() {
  Outcome o;
  SearchOptions opts;
  opts.threads = threads();
  double worst = 0.0;
  for (double g1 : {15.0, 40.0}) {
    const ChannelScenario2 s(g1, 10, 100, ErrorModel::global(1e-5));
    const auto grid = default_r2_grid(s, 40);
    const RegionBoundary sup = boundary_sup(s, grid, opts);
    const RegionBoundary nors = boundary_supnors(s, grid, opts);
    const RegionBoundary ccp = boundary_ccp(s, grid);
    for (double r2 : grid) {
      const double a = r1_or(sup, r2);
      const double b = std::max(r1_or(nors, r2), r1_or(ccp, r2));
      if (std::isinf(a) && std::isinf(b)) continue;
      const double d = std::fabs(a - b);
      worst = std::max(worst, std::isfinite(d) ? d : 1.0);
      if (!(d <= 1e-4)) fail(o, fmt("gamma1=%g R2=%g gap %.3g", g1, r2, d));
    }
  }
  if (o.ok) o.note = fmt("max |SUP - max(SUPnoRS, CCP)| = %.3g nats", worst);
  return o;
}

Outcome inclusion() {
  Outcome o;
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> snr(1.0, 100.0);
  const std::int64_t ns[3] = {100, 512, 5000};
  const double es[2] = {1e-3, 1e-5};
  SearchOptions opts;
  opts.threads = threads();
  double worst = 0.0;
  auto below = [&](const RegionBoundary& in, const RegionBoundary& out, const char* what) {
    for (const BoundaryPoint& p : in.points) {
      const double slack = r1_or(out, p.r2) - p.r1;
      worst = std::min(worst, slack);
      if (slack < -1e-6) fail(o, std::string(what) + fmt(" slack %.3g at R2=%g", slack, p.r2));
    }
  };
  for (int t = 0; t < 6; ++t) {
    const double g1 = snr(rng), g2 = snr(rng);
    const std::int64_t n = ns[rng() % 3];
    const double e = es[rng() % 2];
    const ChannelScenario2 s(g1, g2, n, ErrorModel::global(e));
    const auto grid = default_r2_grid(s, 16);
    const RegionBoundary sup = boundary_sup(s, grid, opts);
    const RegionBoundary nors = boundary_supnors(s, grid, opts);
    const RegionBoundary tdm = boundary_tdm(s, grid, opts);
    const RegionBoundary conv = boundary_converse(s, grid);
    below(nors, sup, "SUPnoRS in SUP");
    below(sup, conv, "SUP in converse");
    below(tdm, conv, "TDM in converse");
  }
  if (o.ok) o.note = fmt("minimum slack %.3g over 6 scenarios", worst);
  return o;
}

double segment_distance(double px, double py, std::pair<double, double> a, std::pair<double, double> b) {
  const double dx = b.first - a.first, dy = b.second - a.second;
  const double len = dx * dx + dy * dy;
  double t = len > 0 ? ((px - a.first) * dx + (py - a.second) * dy) / len : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - a.first - t * dx, py - a.second - t * dy);
}

Outcome asymptotic() {
  Outcome o;
  const ChannelScenario2 s(15, 10, 10000000, ErrorModel::global(1e-3));
  SearchOptions opts;
  opts.threads = threads();
  const RegionBoundary b = boundary_supnors(s, default_r2_grid(s, 60), opts);
  if (b.points.size() < 2) {
    fail(o, "boundary too short");
    return o;
  }
  std::vector<std::pair<double, double>> poly;
  for (const BoundaryPoint& q : b.points) poly.emplace_back(q.r2, q.r1);
  poly.emplace_back(b.points.back().r2, 0.0);
  double worst = 0.0;
  for (double a : linspace(0.0, 1.0, 20)) {
    const double c1 = capacity(a * 15);
    const double c2 = capacity((1 - a) * 10 / (1 + a * 10));
    double d = 1e9;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) d = std::min(d, segment_distance(c2, c1, poly[i], poly[i + 1]));
    worst = std::max(worst, d);
  }
  if (worst >= 5e-3) fail(o, fmt("capacity point %.4g nats away", worst));
  if (o.ok) o.note = fmt("max distance to the capacity boundary %.3g nats", worst);
  return o;
}

Outcome kuser_cross_check() {
  Outcome o;
  std::mt19937_64 rng(1618);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double alpha = 0.02 + 0.96 * unit(rng);
    const double e_strong = std::pow(10.0, -1.0 - 5.0 * unit(rng));
    const double e_weak = std::pow(10.0, -1.0 - 5.0 * unit(rng));
    const double gs = 2.0 + 60.0 * unit(rng);
    const double gw = gs * (0.05 + 0.9 * unit(rng));
    const ChannelScenarioK k({gs, gw}, 300, ErrorModelK::per_user({e_strong, e_weak}));
    const KUserAchievable r = kuser_achievable_point(k, PowerSplitK{{alpha, 1.0 - alpha}}, {e_strong, e_weak});
    if (!r.feasible) {
      fail(o, "allocation rejected");
      continue;
    }
    const double layer = specfun::q_tail(r.users[0].shift);
    const ChannelScenario2 s(gs, gw, 300, ErrorModel::per_user(e_strong, e_weak));
    const RateConstraintSet2 b = sup_constraints(s, SupParams{CloudUser::User2, alpha, 0.0, layer, layer, e_weak});
    worst = std::max({worst, std::fabs(r.users[0].rhs[0] - b.sat), std::fabs(r.users[0].rhs[1] - b.sum),
                      std::fabs(r.users[1].rhs[0] - b.cc)});
  }
  if (worst > 1e-4) fail(o, fmt("constraint mismatch %.3g", worst));

  for (double e : {1e-5, 1e-3, 0.1}) {
    for (auto [g1, g2] : {std::pair{15.0, 10.0}, std::pair{3.0, 40.0}}) {
      const auto c = kuser_converse(ChannelScenarioK({g1, g2}, 100, ErrorModelK::global(e)));
      if (c.size() != 3 || c[0].bound != kappa(100, g1, e) || c[1].bound != kappa(100, g2, e) ||
          c[2].bound != kappa(100, std::max(g1, g2), 2 * e)) {
        fail(o, fmt("converse differs at eps=%g", e));
      }
    }
  }
  if (o.ok) o.note = fmt("max constraint gap %.3g over 50 draws, converse exact", worst);
  return o;
}

Outcome classification_map() {
  Outcome o;
  ClassifyOptions c;
  c.model = ErrorModel::global(0.1);
  c.n = 100;
  c.search.threads = threads();
  const auto g = linspace(2.0, 50.0, 25);
  const SchemeClassification m = classify_schemes(g, g, c);
  std::set<std::string> families;
  bool mirror = true;
  for (std::size_t i = 0; i < 25; ++i) {
    for (std::size_t j = 0; j < 25; ++j) {
      const SchemeLabel l = m.cells[i * 25 + j].label;
      if (l != m.cells[j * 25 + i].label) mirror = false;
      if (l == SchemeLabel::Ccp) families.insert("CCP");
      if (l == SchemeLabel::None) families.insert("NONE");
      if (l == SchemeLabel::Sup || l == SchemeLabel::SupNoRs || l == SchemeLabel::Sup1 || l == SchemeLabel::Sup2) {
        families.insert("SUP");
      }
    }
  }
  if (families.size() != 3) fail(o, "only " + std::to_string(families.size()) + " label families");
  if (!mirror || !m.symmetric) fail(o, "map not symmetric");
  if (o.ok) o.note = "CCP, SUP and NONE present, symmetric";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome cli_determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "sobc_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "fig3.json") << R"({"scenario":{"gamma1":15,"gamma2":10,"n":100,
    "error":{"model":"global","eps":1e-5}},"schemes":["SUP","SUPNORS","CCP","TDM","CONVERSE"],
    "grid":{"r2_points":40}})";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(SOBC_CLI_PATH) + " region --seed 7 --threads 2 --config " +
                            (dir / "fig3.json").string() + " --out " + (dir / run).string();
    if (std::system(cmd.c_str()) != 0) fail(o, std::string("run ") + run + " failed");
  }
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    ++files;
    const fs::path other = dir / "b" / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) fail(o, e.path().filename().string() + " differs");
  }
  if (files != 5) fail(o, std::to_string(files) + " files written");
  if (o.ok) o.note = "5 region files byte-identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "special-function oracles", 60, special_functions},
      {2, "F closed forms", 10, f_closed_forms},
      {3, "dispersion identities", 5, dispersion_identities},
      {4, "ordering flip", 120, ordering_flip},
      {5, "beta-interior emptiness", 600, beta_interior},
      {6, "inclusion suite", 900, inclusion},
      {7, "asymptotic consistency", 60, asymptotic},
      {8, "K-user cross-check", 60, kuser_cross_check},
      {9, "classification map", 1200, classification_map},
      {10, "CLI determinism", 120, cli_determinism},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      fail(o, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) fail(o, fmt("took %.1f s, budget %.0f s", secs, c.budget_s));
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.note.c_str(), secs);
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
