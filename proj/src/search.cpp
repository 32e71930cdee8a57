#include "sobc/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "sobc/errors.hpp"
#include "sobc/itcore.hpp"

namespace sobc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogSpan = 12.0;  // decades covered by the coarse grid

std::vector<double> eps_axis(double cap, std::size_t points) {
  std::vector<double> out;
  out.reserve(points + 1);
  out.push_back(0.0);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(cap * std::pow(10.0, -kLogSpan * (1.0 - f)));
  }
  out.back() = cap;
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  if (count > 1) out.back() = hi;
  return out;
}

// R1 at each grid point, -inf where the scheme has no point.
std::vector<double> sample(const RegionBoundary& b, const std::vector<double>& grid) {
  std::vector<double> out(grid.size(), kNegInf);
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    while (k < b.points.size() && b.points[k].r2 < grid[i]) ++k;
    if (k < b.points.size() && b.points[k].r2 == grid[i]) out[i] = b.points[k].r1;
  }
  return out;
}

std::vector<double> pointwise_max(std::initializer_list<const std::vector<double>*> parts) {
  std::vector<double> out(parts.begin()[0]->size(), kNegInf);
  for (const std::vector<double>* p : parts) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], (*p)[i]);
  }
  return out;
}

}  // namespace

ReliabilityOptimum optimize_reliability(const ReliabilityObjective& objective, const ChannelScenario2& s,
                                        CloudUser cloud, double alpha, const SearchOptions& opts) {
  opts.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  const bool global = s.model().kind() == ErrorKind::Global;
  const double eps = global ? s.model().global_eps() : 0.0;
  const double cap_weak = global ? eps : s.model().eps_for(cloud_index(cloud));
  const double cap_strong = global ? eps : s.model().eps_for(strong_index(cloud));
  const double r = corr_coeff(alpha, s.gamma(strong_index(cloud)));

  // theta = (eps10 share, eps11 share, eps2 share) in [0, 1]^3 covers exactly
  // the admissible allocations:
  //   eps2  = t2 * cap_weak
  //   B     = strong-user budget left by eps2
  //   eps10 = t10 * B
  //   eps11 = t11 * (largest eps11 keeping the strong decoder within B)
  auto budget = [&](double t2) {
    const double e2 = t2 * cap_weak;
    return global ? (eps - e2) / (1.0 - e2) : cap_strong;
  };
  auto e11_max = [&](double e10, double b) {
    if (decoding_error(e10, b, r) <= b) return b;
    double lo = 0.0;
    double hi = b;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (decoding_error(e10, mid, r) <= b) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  };
  auto alloc_of = [&](const std::array<double, 3>& t) {
    const double b = budget(t[2]);
    const double e10 = t[0] * b;
    return ReliabilityAllocation{e10, t[1] * e11_max(e10, b), t[2] * cap_weak};
  };
  auto value_of = [&](const ReliabilityAllocation& a) {
    const SupParams p{cloud, alpha, 0.0, a.eps_sat, a.eps_cc_strong, a.eps_weak};
    if (!reliability_feasible(s, p).feasible) return kNegInf;
    return objective(a);
  };

  const std::vector<double> axis = eps_axis(1.0, opts.eps_grid);
  ReliabilityOptimum best;
  best.value = kNegInf;
  std::array<double, 3> best_t{};
  for (double t2 : axis) {
    const double b = budget(t2);
    for (double t10 : axis) {
      const double cap11 = e11_max(t10 * b, b);
      for (double t11 : axis) {
        const ReliabilityAllocation a{t10 * b, t11 * cap11, t2 * cap_weak};
        const double v = value_of(a);
        if (v > best.value) {
          best.value = v;
          best.alloc = a;
          best.feasible = true;
          best_t = {t10, t11, t2};
        }
      }
    }
  }
  if (!best.feasible) throw InfeasibleError("no reliability allocation satisfies the error model");

  const double step = kLogSpan / static_cast<double>(opts.eps_grid - 1);
  for (std::size_t round = 0; round < opts.refinement_rounds; ++round) {
    const double span = step / static_cast<double>(1u << round);
    for (std::size_t k : {2u, 0u, 1u}) {
      if (best_t[k] <= 0.0) continue;
      const double lc = std::log10(best_t[k]);
      auto f = [&](double lt) {
        std::array<double, 3> t = best_t;
        t[k] = std::pow(10.0, lt);
        return value_of(alloc_of(t));
      };
      const GoldenResult g = golden_section_max(f, lc - span, std::min(lc + span, 0.0), 1e-9);
      if (g.value > best.value) {
        best_t[k] = std::pow(10.0, g.x);
        best.alloc = alloc_of(best_t);
        best.value = g.value;
      }
    }
  }
  return best;
}

RegionBoundary trace_boundary(Scheme scheme, const ChannelScenario2& s, const std::vector<double>& r2_grid,
                              const SearchOptions& opts) {
  switch (scheme) {
    case Scheme::Sup: return boundary_sup(s, r2_grid, opts);
    case Scheme::SupNoRs: return boundary_supnors(s, r2_grid, opts);
    case Scheme::Ccp: return boundary_ccp(s, r2_grid);
    case Scheme::Tdm: return boundary_tdm(s, r2_grid, opts);
    case Scheme::Converse: return boundary_converse(s, r2_grid);
  }
  throw DomainError("unknown scheme");
}

std::string_view label_name(SchemeLabel l) noexcept {
  switch (l) {
    case SchemeLabel::None: return "NONE";
    case SchemeLabel::SupNoRs: return "SUPNORS";
    case SchemeLabel::Sup: return "SUP";
    case SchemeLabel::Ccp: return "CCP";
    case SchemeLabel::Sup1: return "SUP-1";
    case SchemeLabel::Sup2: return "SUP-2";
  }
  return "?";
}

SchemeLabel classify_cell(double gamma1, double gamma2, const ClassifyOptions& opts) {
  const bool global = opts.model.kind() == ErrorKind::Global;
  if (global && gamma1 < gamma2) std::swap(gamma1, gamma2);
  const ChannelScenario2 s(gamma1, gamma2, opts.n, opts.model);
  const double floor = std::log(static_cast<double>(opts.n)) / static_cast<double>(opts.n);
  const double top = single_user_rate(s, 2);
  if (!(top >= floor) || single_user_rate(s, 1) < floor || opts.r2_points < 1) return SchemeLabel::None;
  const std::vector<double> grid = linspace(floor, top, std::max<std::size_t>(opts.r2_points, 2));
  SearchOptions so = opts.search;
  so.threads = 1;

  const std::vector<double> ccp = sample(boundary_ccp(s, grid), grid);
  const CloudUser cap = capacity_ordering(s);
  const std::vector<double> nors_cap = sample(boundary_supnors(s, grid, so, cap), grid);
  const std::vector<double> sup_cap = sample(boundary_sup(s, grid, so, cap), grid);

  std::vector<double> nors_other;
  std::vector<double> sup_other;
  std::vector<double> best;
  if (global) {
    best = pointwise_max({&ccp, &nors_cap, &sup_cap});
  } else {
    nors_other = sample(boundary_supnors(s, grid, so, other(cap)), grid);
    sup_other = sample(boundary_sup(s, grid, so, other(cap)), grid);
    best = pointwise_max({&ccp, &nors_cap, &sup_cap, &nors_other, &sup_other});
  }

  std::vector<std::size_t> meaningful;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (best[i] >= floor) meaningful.push_back(i);
  }
  if (meaningful.empty()) return SchemeLabel::None;
  auto matches = [&](const std::vector<double>& cand) {
    for (std::size_t i : meaningful) {
      if (cand[i] < best[i] - opts.match_tolerance) return false;
    }
    return true;
  };

  if (matches(ccp)) return SchemeLabel::Ccp;
  if (matches(nors_cap)) return SchemeLabel::None;
  if (global) return SchemeLabel::Sup;
  if (matches(pointwise_max({&nors_cap, &nors_other}))) return SchemeLabel::SupNoRs;
  const SchemeLabel cap_label = cap == CloudUser::User1 ? SchemeLabel::Sup1 : SchemeLabel::Sup2;
  const SchemeLabel other_label = cap == CloudUser::User1 ? SchemeLabel::Sup2 : SchemeLabel::Sup1;
  if (matches(sup_cap)) return cap_label;
  if (matches(sup_other)) return other_label;
  return SchemeLabel::Sup;
}

SchemeClassification classify_schemes(const std::vector<double>& gamma1_values,
                                      const std::vector<double>& gamma2_values, const ClassifyOptions& opts) {
  opts.search.validate();
  if (gamma1_values.empty() || gamma2_values.empty()) throw DomainError("classification grid is empty");
  if (gamma1_values.size() > 200 || gamma2_values.size() > 200) {
    throw UnsupportedError("classification grids are limited to 200 x 200");
  }
  const bool global = opts.model.kind() == ErrorKind::Global;
  SchemeClassification out;
  out.gamma1_values = gamma1_values;
  out.gamma2_values = gamma2_values;
  out.symmetric = global;

  // Distinct evaluations, keyed by the (canonical) SNR pair.
  std::map<std::pair<double, double>, std::size_t> index;
  std::vector<std::pair<double, double>> jobs;
  auto key = [&](double g1, double g2) {
    if (global && g1 < g2) std::swap(g1, g2);
    return std::make_pair(g1, g2);
  };
  for (double g1 : gamma1_values) {
    for (double g2 : gamma2_values) {
      const auto k = key(g1, g2);
      if (index.emplace(k, jobs.size()).second) jobs.push_back(k);
    }
  }
  std::vector<SchemeLabel> labels(jobs.size());
  parallel_for(jobs.size(), opts.search.threads,
               [&](std::size_t i) { labels[i] = classify_cell(jobs[i].first, jobs[i].second, opts); });
  for (double g1 : gamma1_values) {
    for (double g2 : gamma2_values) {
      out.cells.push_back({g1, g2, labels[index.at(key(g1, g2))]});
    }
  }
  return out;
}

}  // namespace sobc
