#include "sobc/sobc.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sobc/errors.hpp"
#include "sobc/itcore.hpp"
#include "sobc/regions2.hpp"
#include "sobc/regionsK.hpp"
#include "sobc/search.hpp"
#include "sobc/specfun.hpp"

struct sobc_scenario {
  sobc::ChannelScenario2 s;
};

struct sobc_boundary {
  sobc::RegionBoundary b;
};

struct sobc_map {
  sobc::SchemeClassification m;
};

struct sobc_kuser {
  sobc::ChannelScenarioK s;
  sobc::KUserAchievable last;
};

namespace {

thread_local std::string g_last_error;

sobc_status fail(sobc_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
sobc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const sobc::DomainError& e) {
    return fail(SOBC_DOMAIN, e.what());
  } catch (const sobc::UnsupportedError& e) {
    return fail(SOBC_UNSUPPORTED, e.what());
  } catch (const sobc::InfeasibleError& e) {
    return fail(SOBC_INFEASIBLE, e.what());
  } catch (const sobc::NumericalError& e) {
    return fail(SOBC_NUMERICAL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SOBC_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SOBC_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SOBC_INTERNAL, e.what());
  } catch (...) {
    return fail(SOBC_INTERNAL, "unknown error");
  }
}

#define SOBC_REQUIRE(cond, msg) \
  if (!(cond)) return fail(SOBC_INVALID_ARGUMENT, msg)

sobc_status finite_out(double v, double* out) {
  if (std::isnan(v)) throw sobc::NumericalError("result is NaN");
  *out = v;
  return SOBC_OK;
}

sobc::ErrorModel model_of(sobc_error_kind kind, double eps1, double eps2) {
  if (kind == SOBC_GLOBAL) return sobc::ErrorModel::global(eps1);
  if (kind == SOBC_PER_USER) return sobc::ErrorModel::per_user(eps1, eps2);
  throw std::invalid_argument("unknown error kind");
}

sobc::SearchOptions options_of(const sobc_search_options* o) {
  sobc::SearchOptions out;
  if (o != nullptr) {
    out.alpha_grid = o->alpha_grid;
    out.beta_interior = o->beta_interior;
    out.eps_grid = o->eps_grid;
    out.tdm_grid = o->tdm_grid;
    out.refinement_rounds = o->refinement_rounds;
    out.tolerance = o->tolerance;
    out.rng_seed = o->seed;
    out.threads = o->threads;
  }
  out.validate();
  return out;
}

bool valid_scheme(sobc_scheme s) { return s >= SOBC_SUP && s <= SOBC_CONVERSE; }

}  // namespace

extern "C" {

const char* sobc_version(void) { return "0.1.0"; }

const char* sobc_last_error(void) { return g_last_error.c_str(); }

const char* sobc_status_name(sobc_status s) {
  switch (s) {
    case SOBC_OK: return "ok";
    case SOBC_INVALID_ARGUMENT: return "invalid_argument";
    case SOBC_DOMAIN: return "domain";
    case SOBC_INFEASIBLE: return "infeasible";
    case SOBC_UNSUPPORTED: return "unsupported";
    case SOBC_NUMERICAL: return "numerical";
    case SOBC_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* sobc_scheme_name(sobc_scheme s) {
  if (!valid_scheme(s)) return "?";
  return sobc::scheme_name(static_cast<sobc::Scheme>(s)).data();
}

sobc_status sobc_scheme_from_name(const char* name, sobc_scheme* out) {
  SOBC_REQUIRE(name != nullptr && out != nullptr, "null pointer");
  const auto s = sobc::scheme_from_name(name);
  if (!s) return fail(SOBC_INVALID_ARGUMENT, std::string("unknown scheme: ") + name);
  *out = static_cast<sobc_scheme>(*s);
  return SOBC_OK;
}

const char* sobc_label_name(sobc_label l) {
  if (l < SOBC_LABEL_NONE || l > SOBC_LABEL_SUP2) return "?";
  return sobc::label_name(static_cast<sobc::SchemeLabel>(l)).data();
}

void sobc_default_options(sobc_search_options* out) {
  if (out == nullptr) return;
  const sobc::SearchOptions d;
  *out = sobc_search_options{d.alpha_grid, d.beta_interior, d.eps_grid, d.tdm_grid,
                             d.refinement_rounds, d.tolerance, d.rng_seed, d.threads};
}

sobc_status sobc_q_inv(double eps, double* out) {
  SOBC_REQUIRE(out != nullptr, "null pointer");
  return guarded([&] { return finite_out(sobc::specfun::q_inv(eps), out); });
}

sobc_status sobc_bvn_cdf(double h, double k, double rho, double* out) {
  SOBC_REQUIRE(out != nullptr, "null pointer");
  return guarded([&] { return finite_out(sobc::specfun::bvn_cdf(h, k, sobc::specfun::Correlation(rho)), out); });
}

sobc_status sobc_kappa(int64_t n, double snr, double eps, double* out) {
  SOBC_REQUIRE(out != nullptr, "null pointer");
  return guarded([&] {
    (void)sobc::Snr(snr);
    (void)sobc::Reliability(eps);
    return finite_out(sobc::kappa(sobc::Blocklength(n).value(), snr, eps), out);
  });
}

sobc_status sobc_scenario_create(double gamma1, double gamma2, int64_t n, sobc_error_kind kind, double eps1,
                                 double eps2, sobc_scenario** out) {
  SOBC_REQUIRE(out != nullptr, "null pointer");
  SOBC_REQUIRE(kind == SOBC_GLOBAL || kind == SOBC_PER_USER, "unknown error kind");
  *out = nullptr;
  return guarded([&] {
    *out = new sobc_scenario{sobc::ChannelScenario2(gamma1, gamma2, n, model_of(kind, eps1, eps2))};
    return SOBC_OK;
  });
}

void sobc_scenario_destroy(sobc_scenario* s) { delete s; }

sobc_status sobc_single_user_rate(const sobc_scenario* s, int user, double* out) {
  SOBC_REQUIRE(s != nullptr && out != nullptr, "null pointer");
  return guarded([&] { return finite_out(sobc::single_user_rate(s->s, user), out); });
}

sobc_status sobc_ccp_sum_rate(const sobc_scenario* s, double* out) {
  SOBC_REQUIRE(s != nullptr && out != nullptr, "null pointer");
  return guarded([&] { return finite_out(sobc::ccp_sum_rate(s->s), out); });
}

sobc_status sobc_converse(const sobc_scenario* s, double* r1, double* r2, double* sum) {
  SOBC_REQUIRE(s != nullptr && r1 != nullptr && r2 != nullptr && sum != nullptr, "null pointer");
  return guarded([&] {
    const sobc::ConverseRegion2 c = sobc::converse_region(s->s);
    *r1 = c.r1;
    *r2 = c.r2;
    *sum = c.sum;
    return SOBC_OK;
  });
}

sobc_status sobc_default_r2_grid(const sobc_scenario* s, size_t points, double* out, size_t* count) {
  SOBC_REQUIRE(s != nullptr && out != nullptr, "null pointer");
  SOBC_REQUIRE(points >= 1, "need at least one point");
  return guarded([&] {
    const std::vector<double> g = sobc::default_r2_grid(s->s, points);
    std::fill(out, out + points, 0.0);
    std::copy(g.begin(), g.end(), out);
    if (count != nullptr) *count = g.size();
    return SOBC_OK;
  });
}

sobc_status sobc_boundary_trace(const sobc_scenario* s, sobc_scheme scheme, const double* r2_grid, size_t count,
                                const sobc_search_options* opts, sobc_cloud cloud, sobc_boundary** out) {
  SOBC_REQUIRE(s != nullptr && out != nullptr && (r2_grid != nullptr || count == 0), "null pointer");
  SOBC_REQUIRE(valid_scheme(scheme), "unknown scheme");
  SOBC_REQUIRE(cloud >= SOBC_CLOUD_AUTO && cloud <= SOBC_CLOUD_USER2, "unknown cloud choice");
  *out = nullptr;
  return guarded([&] {
    const std::vector<double> grid(r2_grid, r2_grid + count);
    const sobc::SearchOptions o = options_of(opts);
    std::optional<sobc::CloudUser> c;
    if (cloud != SOBC_CLOUD_AUTO) c = static_cast<sobc::CloudUser>(cloud);
    sobc::RegionBoundary b;
    switch (scheme) {
      case SOBC_SUP: b = sobc::boundary_sup(s->s, grid, o, c); break;
      case SOBC_SUPNORS: b = sobc::boundary_supnors(s->s, grid, o, c); break;
      default: b = sobc::trace_boundary(static_cast<sobc::Scheme>(scheme), s->s, grid, o); break;
    }
    *out = new sobc_boundary{std::move(b)};
    return SOBC_OK;
  });
}

size_t sobc_boundary_size(const sobc_boundary* b) { return b == nullptr ? 0 : b->b.points.size(); }

sobc_status sobc_boundary_point_at(const sobc_boundary* b, size_t i, sobc_boundary_point* out) {
  SOBC_REQUIRE(b != nullptr && out != nullptr, "null pointer");
  SOBC_REQUIRE(i < b->b.points.size(), "index out of range");
  const sobc::BoundaryPoint& p = b->b.points[i];
  *out = sobc_boundary_point{};
  out->r2 = p.r2;
  out->r1 = p.r1;
  if (p.sup) {
    out->has_sup = 1;
    out->cloud = static_cast<int>(p.sup->cloud);
    out->alpha = p.sup->alpha;
    out->beta = p.sup->beta;
    out->eps10 = p.sup->eps_sat;
    out->eps11 = p.sup->eps_cc_strong;
    out->eps2 = p.sup->eps_weak;
  }
  if (p.tdm) {
    out->has_tdm = 1;
    out->tau2 = p.tdm->tau2;
    out->alpha1 = p.tdm->alpha1;
    out->alpha2 = p.tdm->alpha2;
    out->tdm_eps1 = p.tdm->eps1;
    out->tdm_eps2 = p.tdm->eps2;
  }
  return SOBC_OK;
}

void sobc_boundary_destroy(sobc_boundary* b) { delete b; }

sobc_status sobc_classify(const double* gamma1, size_t n1, const double* gamma2, size_t n2, int64_t n,
                          sobc_error_kind kind, double eps1, double eps2, size_t r2_points, double match_tolerance,
                          const sobc_search_options* opts, sobc_map** out) {
  SOBC_REQUIRE(out != nullptr && (gamma1 != nullptr || n1 == 0) && (gamma2 != nullptr || n2 == 0), "null pointer");
  SOBC_REQUIRE(kind == SOBC_GLOBAL || kind == SOBC_PER_USER, "unknown error kind");
  *out = nullptr;
  return guarded([&] {
    sobc::ClassifyOptions co;
    co.n = sobc::Blocklength(n).value();
    co.model = model_of(kind, eps1, eps2);
    co.r2_points = r2_points;
    if (!(match_tolerance > 0.0)) throw sobc::DomainError("match tolerance must be > 0");
    co.match_tolerance = match_tolerance;
    co.search = options_of(opts);
    *out = new sobc_map{sobc::classify_schemes(std::vector<double>(gamma1, gamma1 + n1),
                                               std::vector<double>(gamma2, gamma2 + n2), co)};
    return SOBC_OK;
  });
}

size_t sobc_map_size(const sobc_map* m) { return m == nullptr ? 0 : m->m.cells.size(); }

int sobc_map_symmetric(const sobc_map* m) { return m != nullptr && m->m.symmetric ? 1 : 0; }

sobc_status sobc_map_cell(const sobc_map* m, size_t i, double* gamma1, double* gamma2, sobc_label* label) {
  SOBC_REQUIRE(m != nullptr && gamma1 != nullptr && gamma2 != nullptr && label != nullptr, "null pointer");
  SOBC_REQUIRE(i < m->m.cells.size(), "index out of range");
  const sobc::ClassificationCell& c = m->m.cells[i];
  *gamma1 = c.gamma1;
  *gamma2 = c.gamma2;
  *label = static_cast<sobc_label>(c.label);
  return SOBC_OK;
}

void sobc_map_destroy(sobc_map* m) { delete m; }

sobc_status sobc_kuser_create(const double* gammas, size_t k, int64_t n, sobc_error_kind kind, const double* eps,
                              const size_t* order, sobc_kuser** out) {
  SOBC_REQUIRE(gammas != nullptr && eps != nullptr && out != nullptr, "null pointer");
  SOBC_REQUIRE(kind == SOBC_GLOBAL || kind == SOBC_PER_USER, "unknown error kind");
  *out = nullptr;
  return guarded([&] {
    if (k > sobc::kMaxUsers) throw sobc::UnsupportedError("at most 6 users are supported");
    sobc::ErrorModelK model = kind == SOBC_GLOBAL ? sobc::ErrorModelK::global(eps[0])
                                                  : sobc::ErrorModelK::per_user(std::vector<double>(eps, eps + k));
    std::vector<std::size_t> ord;
    if (order != nullptr) ord.assign(order, order + k);
    *out = new sobc_kuser{sobc::ChannelScenarioK(std::vector<double>(gammas, gammas + k), n, std::move(model),
                                                 std::move(ord)),
                          {}};
    return SOBC_OK;
  });
}

void sobc_kuser_destroy(sobc_kuser* s) { delete s; }

sobc_status sobc_kuser_default_allocation(const sobc_kuser* s, double* out) {
  SOBC_REQUIRE(s != nullptr && out != nullptr, "null pointer");
  return guarded([&] {
    const std::vector<double> e = sobc::default_eps_allocation(s->s);
    std::copy(e.begin(), e.end(), out);
    return SOBC_OK;
  });
}

sobc_status sobc_kuser_evaluate(sobc_kuser* s, const double* alphas, const double* eps_alloc, uint64_t seed,
                                int* feasible) {
  SOBC_REQUIRE(s != nullptr && alphas != nullptr && feasible != nullptr, "null pointer");
  return guarded([&] {
    const std::size_t k = s->s.users();
    const std::vector<double> e =
        eps_alloc != nullptr ? std::vector<double>(eps_alloc, eps_alloc + k) : sobc::default_eps_allocation(s->s);
    s->last = sobc::kuser_achievable_point(s->s, sobc::PowerSplitK{std::vector<double>(alphas, alphas + k)}, e,
                                           std::nullopt, seed);
    *feasible = s->last.feasible ? 1 : 0;
    return SOBC_OK;
  });
}

sobc_status sobc_kuser_constraint_count(const sobc_kuser* s, size_t user, size_t* out) {
  SOBC_REQUIRE(s != nullptr && out != nullptr, "null pointer");
  SOBC_REQUIRE(user < s->last.users.size(), "no result for this user");
  *out = s->last.users[user].rhs.size();
  return SOBC_OK;
}

sobc_status sobc_kuser_constraint(const sobc_kuser* s, size_t user, size_t i, uint32_t* mask, double* rhs) {
  SOBC_REQUIRE(s != nullptr && mask != nullptr && rhs != nullptr, "null pointer");
  SOBC_REQUIRE(user < s->last.users.size(), "no result for this user");
  const sobc::UserBounds& u = s->last.users[user];
  SOBC_REQUIRE(i < u.rhs.size(), "index out of range");
  uint32_t m = 0;
  for (std::size_t v : u.sums[i]) m |= 1u << v;
  *mask = m;
  *rhs = u.rhs[i];
  return SOBC_OK;
}

sobc_status sobc_kuser_shift(const sobc_kuser* s, size_t user, double* shift, double* std_error) {
  SOBC_REQUIRE(s != nullptr && shift != nullptr && std_error != nullptr, "null pointer");
  SOBC_REQUIRE(user < s->last.users.size(), "no result for this user");
  *shift = s->last.users[user].shift;
  *std_error = s->last.users[user].mvn_std_error;
  return SOBC_OK;
}

sobc_status sobc_kuser_converse(const sobc_kuser* s, double* bounds, size_t capacity) {
  SOBC_REQUIRE(s != nullptr && bounds != nullptr, "null pointer");
  return guarded([&] {
    const std::vector<sobc::SubsetBound> c = sobc::kuser_converse(s->s);
    if (capacity < c.size()) return fail(SOBC_INVALID_ARGUMENT, "bounds buffer too small");
    for (std::size_t i = 0; i < c.size(); ++i) bounds[i] = c[i].bound;
    return SOBC_OK;
  });
}

}  // extern "C"
