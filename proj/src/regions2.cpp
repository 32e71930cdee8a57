#include "sobc/regions2.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "sobc/errors.hpp"

namespace sobc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_open_unit(double e, const char* what) {
  if (!(e > 0.0 && e < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
}

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

struct Caps {
  bool global = true;
  double eps = 0.0;     // global
  double strong = 0.0;  // per-user bound of the cloud+satellite decoder
  double weak = 0.0;    // per-user bound of the cloud-only decoder
};

Caps caps_for(const ChannelScenario2& s, CloudUser cloud) {
  Caps c;
  c.global = s.model().kind() == ErrorKind::Global;
  if (c.global) {
    c.eps = s.model().global_eps();
    c.strong = c.weak = c.eps;
  } else {
    c.strong = s.model().eps_for(strong_index(cloud));
    c.weak = s.model().eps_for(cloud_index(cloud));
  }
  return c;
}

// Means and dispersions of the three superposition bounds for fixed alpha.
struct SupGeometry {
  double cc_mean, cc_disp;
  double sat_mean, sat_disp;
  double sum_mean, sum_disp;
  double r;
};

SupGeometry sup_geometry(const ChannelScenario2& s, CloudUser cloud, double alpha) {
  const double gw = s.gamma(cloud_index(cloud));
  const double gs = s.gamma(strong_index(cloud));
  SupGeometry g{};
  g.cc_mean = 0.5 * std::log1p((1.0 - alpha) * gw / (1.0 + alpha * gw));
  g.cc_disp = cloud_dispersion(alpha * gw, gw);
  g.sat_mean = capacity(alpha * gs);
  g.sat_disp = dispersion(alpha * gs);
  g.sum_mean = capacity(gs);
  g.sum_disp = dispersion(gs);
  g.r = corr_coeff(alpha, gs);
  return g;
}

bool reliability_ok(const Caps& c, double eps_strong, double eps_weak) {
  if (c.global) return eps_strong + eps_weak - eps_strong * eps_weak <= c.eps;
  return eps_strong <= c.strong && eps_weak <= c.weak;
}

// Fixed (scenario, ordering) solver with the per-call quantiles hoisted.
class SupSolver {
 public:
  SupSolver(const ChannelScenario2& s, CloudUser cloud)
      : s_(s), cloud_(cloud), caps_(caps_for(s, cloud)),
        q_weak_(specfun::q_inv(caps_.weak)), q_strong_(specfun::q_inv(caps_.strong)),
        root_n_(std::sqrt(static_cast<double>(s.n()))) {}

  // R1 can not exceed this without some reliability exceeding its cap.
  double upper_bound(const SupGeometry& g, double beta, double r2) const {
    const double b_cc = std::max(0.0, g.cc_mean - std::sqrt(g.cc_disp) / root_n_ * q_weak_);
    const double b_sat = std::max(0.0, g.sat_mean - std::sqrt(g.sat_disp) / root_n_ * q_strong_);
    const double b_sum = std::max(0.0, g.sum_mean - std::sqrt(g.sum_disp) / root_n_ * q_strong_);
    double t = b_sum - r2;
    if (cloud_ == CloudUser::User2) {
      if (beta > 0.0) {
        t = std::min(t, (b_cc - r2) / beta);
      } else if (r2 > b_cc) {
        return -1.0;
      }
      if (beta < 1.0) t = std::min(t, b_sat / (1.0 - beta));
    } else {
      t = std::min(t, b_cc - beta * r2);
      if ((1.0 - beta) * r2 > b_sat) return -1.0;
    }
    return t;
  }

  bool check(const SupGeometry& g, double alpha, double beta, double r2, double t, SupParams* out) const {
    const bool cloud2 = cloud_ == CloudUser::User2;
    const double rw = cloud2 ? r2 : t;
    const double rs = cloud2 ? t : r2;
    const std::int64_t n = s_.n();
    const double e2 = required_reliability(g.cc_mean, g.cc_disp, n, rw + beta * rs);
    if (!(e2 <= 1.0)) return false;
    const double e10 = required_reliability(g.sat_mean, g.sat_disp, n, (1.0 - beta) * rs);
    if (!(e10 <= 1.0)) return false;
    const double e11 = required_reliability(g.sum_mean, g.sum_disp, n, rw + rs);
    if (!(e11 <= 1.0)) return false;
    const double es = decoding_error(e10, e11, g.r);
    if (!reliability_ok(caps_, es, e2)) return false;
    if (out != nullptr) *out = SupParams{cloud_, alpha, beta, e10, e11, e2};
    return true;
  }

  SupSolution solve(double alpha, double beta, double r2, double prune_below = -kInf) const {
    SupSolution sol;
    const SupGeometry g = sup_geometry(s_, cloud_, alpha);
    double hi = upper_bound(g, beta, r2);
    if (hi < 0.0) {
      if (hi < -1e-14) return sol;
      hi = 0.0;
    }
    if (hi <= prune_below) return sol;
    SupParams p;
    if (!check(g, alpha, beta, r2, 0.0, &p)) return sol;
    double lo = 0.0;
    if (check(g, alpha, beta, r2, hi, &p)) {
      lo = hi;
    } else {
      const double tol = 1e-11 * std::max(1.0, hi);
      for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (check(g, alpha, beta, r2, mid, nullptr)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      check(g, alpha, beta, r2, lo, &p);
    }
    sol.feasible = true;
    sol.r1 = lo;
    sol.params = p;
    return sol;
  }

 private:
  const ChannelScenario2& s_;
  CloudUser cloud_;
  Caps caps_;
  double q_weak_;
  double q_strong_;
  double root_n_;
};

std::vector<double> beta_grid(const SearchOptions& opts, bool splitting) {
  if (!splitting) return {0.0};
  return linspace(0.0, 1.0, opts.beta_interior + 2);
}

// Coarse (alpha, beta) scan followed by coordinate-wise golden refinement.
SupSolution search_sup_point(const ChannelScenario2& s, CloudUser cloud, double r2,
                             const SearchOptions& opts, bool splitting) {
  const SupSolver solver(s, cloud);
  const std::vector<double> alphas = linspace(0.0, 1.0, opts.alpha_grid);
  const std::vector<double> betas = beta_grid(opts, splitting);
  SupSolution best;
  best.r1 = -1.0;
  for (double a : alphas) {
    for (double b : betas) {
      const SupSolution cand = solver.solve(a, b, r2, best.feasible ? best.r1 : -kInf);
      if (cand.feasible && cand.r1 > best.r1) best = cand;
    }
  }
  if (!best.feasible) return best;

  double da = 1.0 / static_cast<double>(opts.alpha_grid - 1);
  double db = splitting ? 1.0 / static_cast<double>(opts.beta_interior + 1) : 0.0;
  const double xtol = 1e-7;
  for (std::size_t round = 0; round < opts.refinement_rounds; ++round) {
    {
      const double b = best.params.beta;
      auto f = [&](double a) {
        const SupSolution c = solver.solve(a, b, r2);
        return c.feasible ? c.r1 : -1.0;
      };
      const double a0 = best.params.alpha;
      const GoldenResult g = golden_section_max(f, std::max(0.0, a0 - da), std::min(1.0, a0 + da), xtol);
      if (g.value > best.r1) best = solver.solve(g.x, b, r2);
    }
    if (splitting) {
      const double a = best.params.alpha;
      auto f = [&](double b) {
        const SupSolution c = solver.solve(a, b, r2);
        return c.feasible ? c.r1 : -1.0;
      };
      const double b0 = best.params.beta;
      const GoldenResult g = golden_section_max(f, std::max(0.0, b0 - db), std::min(1.0, b0 + db), xtol);
      if (g.value > best.r1) best = solver.solve(a, g.x, r2);
    }
    da *= 0.5;
    db *= 0.5;
  }
  return best;
}

std::vector<CloudUser> orderings_for(const ChannelScenario2& s, std::optional<CloudUser> cloud) {
  if (cloud) return {*cloud};
  const CloudUser cap = capacity_ordering(s);
  if (s.model().kind() == ErrorKind::Global) return {cap};
  return {cap, other(cap)};
}

void require_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("R2 grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) throw DomainError("R2 grid values must be finite and >= 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("R2 grid must be strictly increasing");
  }
}

RegionBoundary trace_sup_family(const ChannelScenario2& s, const std::vector<double>& grid,
                                const SearchOptions& opts, std::optional<CloudUser> cloud, bool splitting) {
  opts.validate();
  require_grid(grid);
  const std::vector<CloudUser> orders = orderings_for(s, cloud);
  std::vector<SupSolution> per_point(grid.size());
  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    SupSolution best;
    best.r1 = -1.0;
    for (CloudUser c : orders) {
      SupSolution cand = search_sup_point(s, c, grid[i], opts, false);
      if (splitting) {
        const SupSolution full = search_sup_point(s, c, grid[i], opts, true);
        if (full.feasible && (!cand.feasible || full.r1 > cand.r1 + 1e-12)) cand = full;
      }
      if (cand.feasible && cand.r1 > best.r1) best = cand;
    }
    per_point[i] = best;
  });
  RegionBoundary out;
  out.scheme = splitting ? Scheme::Sup : Scheme::SupNoRs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!per_point[i].feasible) continue;
    BoundaryPoint p;
    p.r2 = grid[i];
    p.r1 = per_point[i].r1;
    p.sup = per_point[i].params;
    out.points.push_back(p);
  }
  return out;
}

TdmSolution search_tdm_point(const ChannelScenario2& s, double r2, const SearchOptions& opts) {
  const std::vector<double> taus = linspace(0.0, 1.0, opts.tdm_grid);
  const std::vector<double> powers = linspace(0.0, 1.0, opts.tdm_grid);
  TdmSolution best;
  best.r1 = -1.0;
  for (double t : taus) {
    for (double p : powers) {
      const TdmSolution c = tdm_solve(s, t, p, r2);
      if (c.feasible && c.r1 > best.r1) best = c;
    }
  }
  if (!best.feasible) return best;
  double dt = 1.0 / static_cast<double>(opts.tdm_grid - 1);
  double dp = dt;
  const double xtol = 1e-7;
  double tau = best.params.tau2;
  double pow2 = best.params.tau2 * best.params.alpha2;
  for (std::size_t round = 0; round < opts.refinement_rounds; ++round) {
    {
      auto f = [&](double t) {
        const TdmSolution c = tdm_solve(s, t, pow2, r2);
        return c.feasible ? c.r1 : -1.0;
      };
      const GoldenResult g = golden_section_max(f, std::max(0.0, tau - dt), std::min(1.0, tau + dt), xtol);
      if (g.value > best.r1) {
        best = tdm_solve(s, g.x, pow2, r2);
        tau = g.x;
      }
    }
    {
      auto f = [&](double p) {
        const TdmSolution c = tdm_solve(s, tau, p, r2);
        return c.feasible ? c.r1 : -1.0;
      };
      const GoldenResult g = golden_section_max(f, std::max(0.0, pow2 - dp), std::min(1.0, pow2 + dp), xtol);
      if (g.value > best.r1) {
        best = tdm_solve(s, tau, g.x, r2);
        pow2 = g.x;
      }
    }
    dt *= 0.5;
    dp *= 0.5;
  }
  return best;
}

std::int64_t floor_blocklength(double tau, std::int64_t n) {
  return static_cast<std::int64_t>(std::floor(tau * static_cast<double>(n) + 1e-9));
}

}  // namespace

ErrorModel ErrorModel::global(double eps) {
  require_open_unit(eps, "global eps");
  return ErrorModel(ErrorKind::Global, eps, eps);
}

ErrorModel ErrorModel::per_user(double eps1, double eps2) {
  require_open_unit(eps1, "eps1");
  require_open_unit(eps2, "eps2");
  return ErrorModel(ErrorKind::PerUser, eps1, eps2);
}

double ErrorModel::eps_for(int user) const {
  if (user == 1) return e1_;
  if (user == 2) return e2_;
  throw DomainError("user index must be 1 or 2");
}

double ErrorModel::global_eps() const {
  if (kind_ != ErrorKind::Global) throw DomainError("error model is per-user");
  return e1_;
}

ChannelScenario2::ChannelScenario2(double gamma1, double gamma2, std::int64_t n, ErrorModel model)
    : gamma1_(Snr(gamma1).value()), gamma2_(Snr(gamma2).value()), n_(Blocklength(n).value()), model_(model) {}

double ChannelScenario2::gamma(int user) const {
  if (user == 1) return gamma1_;
  if (user == 2) return gamma2_;
  throw DomainError("user index must be 1 or 2");
}

CloudUser capacity_ordering(const ChannelScenario2& s) noexcept {
  return s.gamma1() < s.gamma2() ? CloudUser::User1 : CloudUser::User2;
}

RateConstraintSet2 sup_constraints(const ChannelScenario2& s, const SupParams& p, double r0) {
  require_unit(p.alpha, "alpha");
  require_unit(p.beta, "beta");
  require_unit(p.eps_sat, "eps10");
  require_unit(p.eps_cc_strong, "eps11");
  require_unit(p.eps_weak, "eps2");
  if (!(r0 >= 0.0)) throw DomainError("R0 must be >= 0");
  const SupGeometry g = sup_geometry(s, p.cloud, p.alpha);
  const std::int64_t n = s.n();
  RateConstraintSet2 out;
  out.cc = std::max(0.0, penalized_rate(g.cc_mean, g.cc_disp, n, p.eps_weak) - r0);
  out.sat = std::max(0.0, penalized_rate(g.sat_mean, g.sat_disp, n, p.eps_sat));
  out.sum = std::max(0.0, penalized_rate(g.sum_mean, g.sum_disp, n, p.eps_cc_strong) - r0);
  return out;
}

RatePair sup_rate_pair(const ChannelScenario2& s, const SupParams& p, std::optional<double> cloud_rate) {
  const RateConstraintSet2 b = sup_constraints(s, p);
  RatePair out;
  const double rw = cloud_rate ? *cloud_rate : std::min(b.cc, b.sum);
  if (!(rw >= 0.0) || rw > b.cc || rw > b.sum) return out;
  double rs = b.sum - rw;
  if (p.beta < 1.0) rs = std::min(rs, b.sat / (1.0 - p.beta));
  if (p.beta > 0.0) rs = std::min(rs, (b.cc - rw) / p.beta);
  rs = std::max(0.0, rs);
  out.feasible = true;
  if (p.cloud == CloudUser::User2) {
    out.r2 = rw;
    out.r1 = rs;
  } else {
    out.r1 = rw;
    out.r2 = rs;
  }
  return out;
}

ReliabilityCheck reliability_feasible(const ChannelScenario2& s, const SupParams& p) {
  require_unit(p.alpha, "alpha");
  const double gs = s.gamma(strong_index(p.cloud));
  ReliabilityCheck out;
  out.eps_strong = decoding_error(p.eps_sat, p.eps_cc_strong, corr_coeff(p.alpha, gs));
  require_unit(p.eps_weak, "eps2");
  out.feasible = reliability_ok(caps_for(s, p.cloud), out.eps_strong, p.eps_weak);
  return out;
}

SupSolution sup_solve(const ChannelScenario2& s, CloudUser cloud, double alpha, double beta, double r2) {
  require_unit(alpha, "alpha");
  require_unit(beta, "beta");
  if (!(r2 >= 0.0)) throw DomainError("R2 must be >= 0");
  return SupSolver(s, cloud).solve(alpha, beta, r2);
}

std::string_view scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::Sup: return "SUP";
    case Scheme::SupNoRs: return "SUPNORS";
    case Scheme::Ccp: return "CCP";
    case Scheme::Tdm: return "TDM";
    case Scheme::Converse: return "CONVERSE";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(std::string_view name) noexcept {
  for (Scheme s : {Scheme::Sup, Scheme::SupNoRs, Scheme::Ccp, Scheme::Tdm, Scheme::Converse}) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<double> RegionBoundary::r1_at(double r2) const {
  for (const BoundaryPoint& p : points) {
    if (p.r2 == r2) return p.r1;
  }
  return std::nullopt;
}

double single_user_rate(const ChannelScenario2& s, int user) {
  return std::max(0.0, kappa(s.n(), s.gamma(user), s.model().eps_for(user)));
}

std::vector<double> default_r2_grid(const ChannelScenario2& s, std::size_t points) {
  const double top = single_user_rate(s, 2);
  if (points < 2 || !(top > 0.0)) return {0.0};
  return linspace(0.0, top, points);
}

RegionBoundary boundary_sup(const ChannelScenario2& s, const std::vector<double>& r2_grid,
                            const SearchOptions& opts, std::optional<CloudUser> cloud) {
  return trace_sup_family(s, r2_grid, opts, cloud, true);
}

RegionBoundary boundary_supnors(const ChannelScenario2& s, const std::vector<double>& r2_grid,
                                const SearchOptions& opts, std::optional<CloudUser> cloud) {
  return trace_sup_family(s, r2_grid, opts, cloud, false);
}

CcpSolution ccp_solution(const ChannelScenario2& s) {
  const std::int64_t n = s.n();
  const double g1 = s.gamma1();
  const double g2 = s.gamma2();
  CcpSolution out;
  if (s.model().kind() == ErrorKind::PerUser) {
    out.eps1 = s.model().eps_for(1);
    out.eps2 = s.model().eps_for(2);
    out.sum_rate = std::max(0.0, std::min(kappa(n, g1, out.eps1), kappa(n, g2, out.eps2)));
    return out;
  }
  // (1 - eps1) = (1 - eps)^theta, (1 - eps2) = (1 - eps)^(1 - theta), with
  // theta = logistic(t) so both tails stay accurate.
  const double log_keep = std::log1p(-s.model().global_eps());
  auto e1 = [&](double t) { return -std::expm1(log_keep / (1.0 + std::exp(-t))); };
  auto e2 = [&](double t) { return -std::expm1(log_keep / (1.0 + std::exp(t))); };
  auto gap = [&](double t) { return kappa(n, g1, e1(t)) - kappa(n, g2, e2(t)); };
  double lo = -600.0;
  double hi = 600.0;
  double t = 0.0;
  if (gap(lo) >= 0.0) {
    t = lo;
  } else if (gap(hi) <= 0.0) {
    t = hi;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (gap(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    t = lo;
  }
  out.eps1 = e1(t);
  out.eps2 = e2(t);
  out.sum_rate = std::max(0.0, std::min(kappa(n, g1, out.eps1), kappa(n, g2, out.eps2)));
  return out;
}

double ccp_sum_rate(const ChannelScenario2& s) { return ccp_solution(s).sum_rate; }

RegionBoundary boundary_ccp(const ChannelScenario2& s, const std::vector<double>& r2_grid) {
  require_grid(r2_grid);
  const CcpSolution c = ccp_solution(s);
  const CloudUser cloud = capacity_ordering(s);
  RegionBoundary out;
  out.scheme = Scheme::Ccp;
  for (double r2 : r2_grid) {
    if (r2 > c.sum_rate) break;
    BoundaryPoint p;
    p.r2 = r2;
    p.r1 = c.sum_rate - r2;
    SupParams sp;
    sp.cloud = cloud;
    sp.alpha = 0.0;
    sp.beta = 1.0;
    sp.eps_sat = 0.0;
    sp.eps_cc_strong = strong_index(cloud) == 1 ? c.eps1 : c.eps2;
    sp.eps_weak = cloud_index(cloud) == 1 ? c.eps1 : c.eps2;
    p.sup = sp;
    out.points.push_back(p);
  }
  return out;
}

TdmSolution tdm_solve(const ChannelScenario2& s, double tau2, double power2, double r2) {
  require_unit(tau2, "tau2");
  require_unit(power2, "tau2 * alpha2");
  if (!(r2 >= 0.0)) throw DomainError("R2 must be >= 0");
  const std::int64_t n = s.n();
  const bool global = s.model().kind() == ErrorKind::Global;
  TdmSolution out;
  TdmParams p;
  p.tau2 = tau2;
  const std::int64_t n2 = floor_blocklength(tau2, n);
  double e2 = 0.0;
  if (n2 < 1) {
    if (r2 > 0.0) return out;
    p.alpha2 = 0.0;
  } else {
    p.alpha2 = power2 / tau2;
    const double x2 = p.alpha2 * s.gamma2();
    e2 = required_reliability(capacity(x2), dispersion(x2), n2, r2 / tau2);
  }
  double e1 = 0.0;
  if (global) {
    const double eps = s.model().global_eps();
    if (!(e2 < eps)) return out;
    e1 = (eps - e2) / (1.0 - e2);
  } else {
    if (!(e2 <= s.model().eps_for(2))) return out;
    e1 = s.model().eps_for(1);
  }
  const double tau1 = 1.0 - tau2;
  const std::int64_t n1 = floor_blocklength(tau1, n);
  double r1 = 0.0;
  if (n1 >= 1) {
    p.alpha1 = (1.0 - power2) / tau1;
    r1 = tau1 * std::max(0.0, kappa(n1, p.alpha1 * s.gamma1(), e1));
  }
  p.eps1 = e1;
  p.eps2 = e2;
  out.feasible = true;
  out.r1 = r1;
  out.params = p;
  return out;
}

RegionBoundary boundary_tdm(const ChannelScenario2& s, const std::vector<double>& r2_grid,
                            const SearchOptions& opts) {
  opts.validate();
  require_grid(r2_grid);
  std::vector<TdmSolution> per_point(r2_grid.size());
  parallel_for(r2_grid.size(), opts.threads,
               [&](std::size_t i) { per_point[i] = search_tdm_point(s, r2_grid[i], opts); });
  RegionBoundary out;
  out.scheme = Scheme::Tdm;
  for (std::size_t i = 0; i < r2_grid.size(); ++i) {
    if (!per_point[i].feasible) continue;
    BoundaryPoint p;
    p.r2 = r2_grid[i];
    p.r1 = per_point[i].r1;
    p.tdm = per_point[i].params;
    out.points.push_back(p);
  }
  return out;
}

ConverseRegion2 converse_region(const ChannelScenario2& s) {
  const std::int64_t n = s.n();
  const double e1 = s.model().eps_for(1);
  const double e2 = s.model().eps_for(2);
  ConverseRegion2 out;
  out.r1 = std::max(0.0, kappa(n, s.gamma1(), e1));
  out.r2 = std::max(0.0, kappa(n, s.gamma2(), e2));
  const double esum = s.model().kind() == ErrorKind::Global ? 2.0 * s.model().global_eps() : e1 + e2;
  if (esum >= 1.0) {
    out.sum_vacuous = true;
    out.sum = kInf;
  } else {
    out.sum = std::max(0.0, kappa(n, std::max(s.gamma1(), s.gamma2()), esum));
  }
  return out;
}

RegionBoundary boundary_converse(const ChannelScenario2& s, const std::vector<double>& r2_grid) {
  require_grid(r2_grid);
  const ConverseRegion2 c = converse_region(s);
  RegionBoundary out;
  out.scheme = Scheme::Converse;
  for (double r2 : r2_grid) {
    if (r2 > c.r2 || r2 > c.sum) break;
    BoundaryPoint p;
    p.r2 = r2;
    p.r1 = std::max(0.0, std::min(c.r1, c.sum - r2));
    out.points.push_back(p);
  }
  return out;
}

RegionBoundary peruser_union_boundary(const ChannelScenario2& s, const std::vector<double>& r2_grid,
                                      const SearchOptions& opts) {
  if (s.model().kind() != ErrorKind::PerUser) throw DomainError("union over orderings needs the per-user model");
  return boundary_sup(s, r2_grid, opts, std::nullopt);
}

}  // namespace sobc
