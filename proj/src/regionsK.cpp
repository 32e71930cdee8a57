#include "sobc/regionsK.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sobc/errors.hpp"
#include "sobc/itcore.hpp"

namespace sobc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_open_unit(double e, const char* what) {
  if (!(e > 0.0 && e < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
}

// Cumulative received SNR at decoder `rank_j` with the codewords of ranks 0..l-1.
double cumulative(const ChannelScenarioK& s, const PowerSplitK& a, std::size_t decoder, std::size_t l) {
  double sum = 0.0;
  for (std::size_t r = 0; r < l; ++r) sum += a.alphas[s.by_rank()[r]];
  return std::min(s.gamma(decoder) * sum, s.gamma(decoder));
}

void require_split(const ChannelScenarioK& s, const PowerSplitK& a) {
  if (a.alphas.size() != s.users()) throw DomainError("power split has the wrong length");
  double total = 0.0;
  for (double x : a.alphas) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("power fractions must lie in [0, 1]");
    total += x;
  }
  if (total > 1.0 + 1e-12) throw DomainError("power fractions sum above 1");
}

}  // namespace

ErrorModelK ErrorModelK::global(double eps) {
  require_open_unit(eps, "global eps");
  return ErrorModelK(true, {eps});
}

ErrorModelK ErrorModelK::per_user(std::vector<double> eps) {
  for (double e : eps) require_open_unit(e, "per-user eps");
  return ErrorModelK(false, std::move(eps));
}

double ErrorModelK::global_eps() const {
  if (!global_) throw DomainError("error model is per-user");
  return eps_[0];
}

double ErrorModelK::eps_for(std::size_t user) const { return global_ ? eps_[0] : eps_.at(user); }

ChannelScenarioK::ChannelScenarioK(std::vector<double> gammas, std::int64_t n, ErrorModelK model,
                                   std::vector<std::size_t> order)
    : gammas_(std::move(gammas)), n_(Blocklength(n).value()), model_(std::move(model)) {
  if (gammas_.size() > kMaxUsers) throw UnsupportedError("at most 6 users are supported");
  if (gammas_.size() < 2) throw DomainError("need at least 2 users");
  for (double g : gammas_) {
    if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("SNRs must be finite and > 0");
  }
  if (!model_.is_global() && model_.size() != gammas_.size()) {
    throw DomainError("per-user error vector has the wrong length");
  }
  if (order.empty()) {
    by_rank_.resize(gammas_.size());
    std::iota(by_rank_.begin(), by_rank_.end(), std::size_t{0});
    std::stable_sort(by_rank_.begin(), by_rank_.end(),
                     [&](std::size_t x, std::size_t y) { return gammas_[x] > gammas_[y]; });
  } else {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted.size() != gammas_.size() || sorted[i] != i) throw DomainError("order must be a permutation of the users");
    }
    by_rank_ = std::move(order);
  }
  rank_of_.resize(gammas_.size());
  for (std::size_t r = 0; r < by_rank_.size(); ++r) rank_of_[by_rank_[r]] = r;
}

UserDispersion kuser_moments(const ChannelScenarioK& s, const PowerSplitK& a, std::size_t user) {
  require_split(s, a);
  const std::size_t K = s.users();
  const std::size_t j = s.rank_of(user);
  const std::size_t dim = K - j;
  const double base = cumulative(s, a, user, j);
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = std::max(base, cumulative(s, a, user, j + i + 1));

  UserDispersion out;
  out.user = user;
  out.mu.resize(dim);
  out.sums.resize(dim);
  const double c_base = capacity(base);
  const double v_base = dispersion(base);
  std::vector<double> v(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out.mu[i] = capacity(p[i]) - c_base;
    for (std::size_t r = j; r <= j + i; ++r) out.sums[i].push_back(s.by_rank()[r]);
    for (std::size_t k = 0; k <= i; ++k) {
      const double lo = std::min(p[i], p[k]);
      const double hi = std::max(p[i], p[k]);
      const double val = cross_dispersion(lo, hi) + v_base - cross_dispersion(base, p[i]) - cross_dispersion(base, p[k]);
      v[i * dim + k] = val;
      v[k * dim + i] = val;
    }
  }
  out.V = specfun::CovarianceMatrix(dim, std::move(v));
  return out;
}

std::vector<double> default_eps_allocation(const ChannelScenarioK& s) {
  const std::size_t K = s.users();
  std::vector<double> out(K);
  if (s.model().is_global()) {
    const double e = -std::expm1(std::log1p(-s.model().global_eps()) / static_cast<double>(K));
    std::fill(out.begin(), out.end(), e);
  } else {
    for (std::size_t u = 0; u < K; ++u) out[u] = s.model().eps_for(u);
  }
  return out;
}

KUserAchievable kuser_achievable_point(const ChannelScenarioK& s, const PowerSplitK& a,
                                       const std::vector<double>& eps_alloc,
                                       const std::optional<std::vector<std::vector<double>>>& directions,
                                       std::uint64_t seed) {
  require_split(s, a);
  const std::size_t K = s.users();
  if (eps_alloc.size() != K) throw DomainError("reliability allocation has the wrong length");
  for (double e : eps_alloc) require_open_unit(e, "allocated eps");
  if (directions && directions->size() != K) throw DomainError("directions need one vector per user");

  KUserAchievable out;
  if (s.model().is_global()) {
    double log_ok = 0.0;
    for (double e : eps_alloc) log_ok += std::log1p(-e);
    if (log_ok < std::log1p(-s.model().global_eps()) - 1e-15) return out;
  } else {
    for (std::size_t u = 0; u < K; ++u) {
      if (eps_alloc[u] > s.model().eps_for(u)) return out;
    }
  }

  const double root_n = std::sqrt(static_cast<double>(s.n()));
  out.users.resize(K);
  for (std::size_t u = 0; u < K; ++u) {
    const UserDispersion m = kuser_moments(s, a, u);
    const std::size_t dim = m.mu.size();
    std::vector<double> d(dim);
    if (directions) {
      if ((*directions)[u].size() != dim) throw DomainError("direction length does not match the constraint count");
      for (std::size_t i = 0; i < dim; ++i) {
        d[i] = (*directions)[u][i];
        if (!(d[i] >= 0.0) || !std::isfinite(d[i])) throw DomainError("direction entries must be finite and >= 0");
      }
    } else {
      for (std::size_t i = 0; i < dim; ++i) d[i] = std::sqrt(std::max(0.0, m.V(i, i)));
    }

    // Components with no spread or no direction never bind.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < dim; ++i) {
      if (m.V(i, i) > 1e-300 && d[i] > 0.0) keep.push_back(i);
    }
    UserBounds& ub = out.users[u];
    ub.user = u;
    ub.sums = m.sums;
    ub.rhs = m.mu;
    const double target = 1.0 - eps_alloc[u];
    if (!keep.empty()) {
      const std::size_t kd = keep.size();
      std::vector<double> sub(kd * kd);
      for (std::size_t x = 0; x < kd; ++x)
        for (std::size_t y = 0; y < kd; ++y) sub[x * kd + y] = m.V(keep[x], keep[y]);
      const specfun::CovarianceMatrix vs(kd, std::move(sub));
      const std::vector<double> lower(kd, -kInf);
      std::vector<double> upper(kd);
      auto prob = [&](double t) {
        for (std::size_t x = 0; x < kd; ++x) upper[x] = t * d[keep[x]];
        return specfun::mvn_rect(lower, upper, vs, seed);
      };
      double t = 0.0;
      double se = 0.0;
      if (kd == 1) {
        // Pr[Z <= t d] = Phi(t d / sigma)
        t = std::sqrt(vs(0, 0)) * specfun::q_inv(eps_alloc[u]) / d[keep[0]];
      } else {
        // one constraint alone gives the lower end, the union bound the upper
        double lo = -kInf;
        double hi = -kInf;
        for (std::size_t x = 0; x < kd; ++x) {
          const double sd = std::sqrt(vs(x, x)) / d[keep[x]];
          lo = std::max(lo, sd * specfun::q_inv(eps_alloc[u]));
          hi = std::max(hi, sd * specfun::q_inv(eps_alloc[u] / static_cast<double>(kd)));
        }
        // Illinois iteration on the bracket
        double g_lo = prob(lo).value - target;
        double g_hi = prob(hi).value - target;
        if (g_lo >= 0.0) hi = lo, g_hi = g_lo;
        int side = 0;
        for (int it = 0; it < 60 && hi - lo > 1e-9 && g_hi > 0.0; ++it) {
          double mid = g_hi > g_lo ? hi - g_hi * (hi - lo) / (g_hi - g_lo) : 0.5 * (lo + hi);
          if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
          const double g = prob(mid).value - target;
          if (g < 0.0) {
            lo = mid;
            g_lo = g;
            if (side == -1) g_hi *= 0.5;
            side = -1;
          } else {
            hi = mid;
            g_hi = g;
            if (side == 1) g_lo *= 0.5;
            side = 1;
          }
        }
        t = hi;
        se = prob(t).std_error;
      }
      ub.shift = t;
      ub.mvn_std_error = se;
      for (std::size_t x : keep) ub.rhs[x] = m.mu[x] - t * d[x] / root_n;
    }
    for (double& r : ub.rhs) r = std::max(0.0, r);
  }
  out.feasible = true;
  return out;
}

std::vector<SubsetBound> kuser_converse(const ChannelScenarioK& s) {
  const std::size_t K = s.users();
  std::vector<SubsetBound> out;
  for (std::uint32_t mask = 1; mask < (1u << K); ++mask) {
    double gmax = 0.0;
    double esum = 0.0;
    for (std::size_t u = 0; u < K; ++u) {
      if (!(mask & (1u << u))) continue;
      gmax = std::max(gmax, s.gamma(u));
      esum += s.model().eps_for(u);
    }
    SubsetBound b;
    b.mask = mask;
    if (esum >= 1.0) {
      b.vacuous = true;
      b.bound = kInf;
    } else {
      b.bound = std::max(0.0, kappa(s.n(), gmax, esum));
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace sobc
