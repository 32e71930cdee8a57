#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_io.hpp"
#include "sobc/sobc.h"

using namespace sobc_cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

// library failure carrying its status code
struct ApiError {
  sobc_status status;
  std::string message;
};

void check(sobc_status st) {
  if (st != SOBC_OK) throw ApiError{st, sobc_last_error()};
}

int exit_code_of(sobc_status st) {
  switch (st) {
    case SOBC_INVALID_ARGUMENT:
    case SOBC_DOMAIN:
    case SOBC_UNSUPPORTED: return kExitConfig;
    case SOBC_INFEASIBLE: return kExitInfeasible;
    default: return kExitNumerical;
  }
}

const char* kind_of(int code) {
  switch (code) {
    case kExitConfig: return "config";
    case kExitInfeasible: return "infeasible";
    default: return "numerical";
  }
}

int report(int code, const std::string& status, const std::string& message, const std::string& path = "") {
  json e = json::object();
  e["exit_code"] = code;
  e["kind"] = kind_of(code);
  e["status"] = status;
  e["message"] = message;
  if (!path.empty()) e["path"] = path;
  json doc = json::object();
  doc["error"] = e;
  std::cerr << doc.dump() << "\n";
  return code;
}

struct Flags {
  std::string config;
  std::string out = ".";
  std::string format;
  std::string units;
  std::optional<std::uint64_t> seed;
  bool hull = false;
  std::optional<std::size_t> threads;
};

struct Run {
  Config cfg;
  std::string command;
  std::string out;
  double scale = 1.0;  // nats -> output units
};

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ScenarioPtr = std::unique_ptr<sobc_scenario, Deleter<sobc_scenario, sobc_scenario_destroy>>;
using BoundaryPtr = std::unique_ptr<sobc_boundary, Deleter<sobc_boundary, sobc_boundary_destroy>>;
using MapPtr = std::unique_ptr<sobc_map, Deleter<sobc_map, sobc_map_destroy>>;
using KUserPtr = std::unique_ptr<sobc_kuser, Deleter<sobc_kuser, sobc_kuser_destroy>>;

json meta_of(const Run& r) {
  json m = json::object();
  m["schema_version"] = kSchemaVersion;
  m["tool"] = std::string("sobc ") + sobc_version();
  m["command"] = r.command;
  m["scenario"] = r.cfg.source;
  m["seed"] = r.cfg.search.seed;
  m["units"] = r.cfg.output.units;
  return m;
}

std::string file_in(const Run& r, const std::string& stem) {
  return (std::filesystem::path(r.out) / (stem + "." + r.cfg.output.format)).string();
}

void emit(const Run& r, const std::string& stem, const json& meta, const Table& t) {
  if (r.cfg.output.format == "json") {
    write_json(file_in(r, stem), meta, table_rows(t));
  } else {
    write_csv(file_in(r, stem), meta, t);
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

const ScenarioSpec& need_scenario(const Config& c, bool gammas) {
  if (!c.scenario.present) throw ConfigError("scenario", "missing");
  if (gammas && !c.scenario.has_gammas) throw ConfigError("scenario.gamma1", "missing");
  return c.scenario;
}

ScenarioPtr make_scenario(const ScenarioSpec& s) {
  sobc_scenario* p = nullptr;
  const double e2 = s.error.kind == SOBC_PER_USER ? s.error.eps[1] : 0.0;
  check(sobc_scenario_create(s.gamma1, s.gamma2, s.n, s.error.kind, s.error.eps[0], e2, &p));
  return ScenarioPtr(p);
}

std::vector<double> r2_grid(const Config& c, const sobc_scenario* s) {
  if (!c.grid.r2_values.empty()) return c.grid.r2_values;
  std::vector<double> g(c.grid.r2_points);
  std::size_t count = 0;
  check(sobc_default_r2_grid(s, g.size(), g.data(), &count));
  g.resize(count);
  return g;
}

std::vector<sobc_boundary_point> trace(const Run& r, const sobc_scenario* s, sobc_scheme scheme,
                                       const std::vector<double>& grid) {
  sobc_boundary* b = nullptr;
  check(sobc_boundary_trace(s, scheme, grid.data(), grid.size(), &r.cfg.search, r.cfg.scenario.cloud, &b));
  BoundaryPtr owned(b);
  std::vector<sobc_boundary_point> pts(sobc_boundary_size(b));
  for (std::size_t i = 0; i < pts.size(); ++i) check(sobc_boundary_point_at(b, i, &pts[i]));
  return pts;
}

std::vector<Cell> region_row(const Run& r, sobc_scheme scheme, const sobc_boundary_point& p, bool params) {
  std::vector<Cell> row{p.r2 / r.scale, p.r1 / r.scale, std::string(sobc_scheme_name(scheme))};
  if (params && p.has_sup) {
    row.insert(row.end(), {p.alpha, p.beta, p.eps10, p.eps11, p.eps2, static_cast<std::int64_t>(p.cloud)});
  } else if (params && p.has_tdm) {
    row.insert(row.end(), {p.alpha1, Cell{}, p.tdm_eps1, Cell{}, p.tdm_eps2, Cell{}});
  } else {
    row.insert(row.end(), 6, Cell{});
  }
  if (scheme == SOBC_TDM) {
    if (params && p.has_tdm) {
      row.insert(row.end(), {p.tau2, p.alpha2});
    } else {
      row.insert(row.end(), 2, Cell{});
    }
  }
  return row;
}

int cmd_region(const Run& r) {
  const ScenarioSpec& sc = need_scenario(r.cfg, true);
  if (r.cfg.schemes.empty()) throw ConfigError("schemes", "missing");
  const ScenarioPtr s = make_scenario(sc);
  const std::vector<double> grid = r2_grid(r.cfg, s.get());
  std::vector<std::string> empty;
  for (sobc_scheme scheme : r.cfg.schemes) {
    const std::vector<sobc_boundary_point> pts = trace(r, s.get(), scheme, grid);
    Table t;
    t.columns = {"R2", "R1", "scheme", "alpha", "beta", "eps10", "eps11", "eps2", "ordering"};
    if (scheme == SOBC_TDM) t.columns.insert(t.columns.end(), {"tau2", "alpha2"});
    std::vector<HullPoint> hull;
    if (r.cfg.output.convex_hull) {
      std::vector<double> x, y;
      for (const auto& p : pts) {
        x.push_back(p.r2);
        y.push_back(p.r1);
      }
      hull = upper_hull(x, y);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sobc_boundary_point p = pts[i];
      bool params = true;
      if (!hull.empty() && !hull[i].vertex) {
        p.r1 = hull[i].y;
        params = false;
      }
      t.rows.push_back(region_row(r, scheme, p, params));
    }
    json meta = meta_of(r);
    meta["scheme"] = sobc_scheme_name(scheme);
    meta["convex_hull"] = r.cfg.output.convex_hull;
    emit(r, "region_" + lower(sobc_scheme_name(scheme)), meta, t);
    if (pts.empty()) empty.push_back(sobc_scheme_name(scheme));
  }
  if (!empty.empty()) {
    std::string names;
    for (const auto& e : empty) names += (names.empty() ? "" : ",") + e;
    return report(kExitInfeasible, "infeasible", "no achievable point on the grid for " + names);
  }
  return kExitOk;
}

int cmd_params(const Run& r) {
  const ScenarioSpec& sc = need_scenario(r.cfg, true);
  const ScenarioPtr s = make_scenario(sc);
  const std::vector<double> grid = r2_grid(r.cfg, s.get());
  const std::vector<sobc_boundary_point> pts = trace(r, s.get(), SOBC_SUP, grid);

  Table sup;
  sup.columns = {"R2", "R1", "alpha", "beta", "eps10", "eps11", "eps2", "ordering"};
  std::vector<std::size_t> with_params;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    if (p.has_sup) {
      sup.rows.push_back({p.r2 / r.scale, p.r1 / r.scale, p.alpha, p.beta, p.eps10, p.eps11, p.eps2,
                          static_cast<std::int64_t>(p.cloud)});
      with_params.push_back(i);
    } else {
      sup.rows.push_back({p.r2 / r.scale, p.r1 / r.scale, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});
    }
  }
  std::stable_sort(with_params.begin(), with_params.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].alpha < pts[b].alpha; });
  Table rel;
  rel.columns = {"alpha", "eps10", "eps11", "eps2", "beta", "R2", "R1", "ordering"};
  for (std::size_t i : with_params) {
    const auto& p = pts[i];
    rel.rows.push_back({p.alpha, p.eps10, p.eps11, p.eps2, p.beta, p.r2 / r.scale, p.r1 / r.scale,
                        static_cast<std::int64_t>(p.cloud)});
  }
  json meta = meta_of(r);
  meta["scheme"] = "SUP";
  emit(r, "params_sup", meta, sup);
  emit(r, "params_reliability", meta, rel);
  if (pts.empty()) return report(kExitInfeasible, "infeasible", "no achievable SUP point on the grid");
  return kExitOk;
}

int cmd_map(const Run& r) {
  const ScenarioSpec& sc = need_scenario(r.cfg, false);
  if (!r.cfg.map.present) throw ConfigError("map", "missing");
  const MapSpec& m = r.cfg.map;
  const double e2 = sc.error.kind == SOBC_PER_USER ? sc.error.eps[1] : 0.0;
  sobc_map* raw = nullptr;
  check(sobc_classify(m.gamma1.data(), m.gamma1.size(), m.gamma2.data(), m.gamma2.size(), sc.n, sc.error.kind,
                      sc.error.eps[0], e2, m.r2_points, m.match_tolerance, &r.cfg.search, &raw));
  const MapPtr map(raw);
  Table t;
  t.columns = {"gamma1", "gamma2", "label"};
  for (std::size_t i = 0; i < sobc_map_size(map.get()); ++i) {
    double g1 = 0.0, g2 = 0.0;
    sobc_label label{};
    check(sobc_map_cell(map.get(), i, &g1, &g2, &label));
    if (sc.error.kind == SOBC_GLOBAL && g1 < g2) continue;
    t.rows.push_back({g1, g2, std::string(sobc_label_name(label))});
  }
  json meta = meta_of(r);
  meta["symmetric"] = sobc_map_symmetric(map.get()) != 0;
  meta["half_plane"] = sc.error.kind == SOBC_GLOBAL ? "gamma1>=gamma2" : "full";
  emit(r, "map", meta, t);
  return kExitOk;
}

std::string users_of(std::uint32_t mask) {
  std::string s;
  for (std::uint32_t u = 0; u < 32; ++u) {
    if (mask & (1u << u)) s += (s.empty() ? "" : "+") + std::to_string(u + 1);
  }
  return s;
}

json users_json(std::uint32_t mask) {
  json a = json::array();
  for (std::uint32_t u = 0; u < 32; ++u) {
    if (mask & (1u << u)) a.push_back(u + 1);
  }
  return a;
}

int cmd_kuser(const Run& r) {
  if (!r.cfg.kuser.present) throw ConfigError("kuser", "missing");
  const KUserSpec& k = r.cfg.kuser;
  const std::size_t K = k.gammas.size();
  sobc_kuser* raw = nullptr;
  check(sobc_kuser_create(k.gammas.data(), K, k.n, k.error.kind, k.error.eps.data(),
                          k.ordering.empty() ? nullptr : k.ordering.data(), &raw));
  const KUserPtr s(raw);

  std::vector<double> alloc(K);
  if (k.eps_allocation.empty()) {
    check(sobc_kuser_default_allocation(s.get(), alloc.data()));
  } else {
    alloc = k.eps_allocation;
  }

  const std::uint64_t seed = r.cfg.search.seed;
  Table ach;
  for (std::size_t u = 0; u < K; ++u) ach.columns.push_back("alpha" + std::to_string(u + 1));
  ach.columns.insert(ach.columns.begin(), "point");
  ach.columns.insert(ach.columns.end(), {"feasible", "user", "eps", "mask", "users", "rhs", "shift"});
  json points = json::array();
  for (std::size_t pi = 0; pi < k.alphas.size(); ++pi) {
    const std::vector<double>& a = k.alphas[pi];
    int feasible = 0;
    check(sobc_kuser_evaluate(s.get(), a.data(), alloc.data(), seed, &feasible));
    std::vector<Cell> lead{static_cast<std::int64_t>(pi)};
    for (double x : a) lead.push_back(x);
    json pj = json::object();
    pj["alphas"] = a;
    pj["feasible"] = feasible != 0;
    pj["eps"] = alloc;
    pj["users"] = json::array();
    if (!feasible) {
      std::vector<Cell> row = lead;
      row.insert(row.end(), {static_cast<std::int64_t>(0), Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});
      ach.rows.push_back(std::move(row));
      points.push_back(std::move(pj));
      continue;
    }
    for (std::size_t u = 0; u < K; ++u) {
      std::size_t count = 0;
      double shift = 0.0, se = 0.0;
      check(sobc_kuser_constraint_count(s.get(), u, &count));
      check(sobc_kuser_shift(s.get(), u, &shift, &se));
      json uj = json::object();
      uj["user"] = u + 1;
      uj["shift"] = shift;
      uj["constraints"] = json::array();
      json rhs_vec = json::array();
      for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t mask = 0;
        double rhs = 0.0;
        check(sobc_kuser_constraint(s.get(), u, i, &mask, &rhs));
        std::vector<Cell> row = lead;
        row.insert(row.end(), {static_cast<std::int64_t>(1), static_cast<std::int64_t>(u + 1), alloc[u],
                               static_cast<std::int64_t>(mask), users_of(mask), rhs / r.scale, shift});
        ach.rows.push_back(std::move(row));
        json cj = json::object();
        cj["mask"] = mask;
        cj["users"] = users_json(mask);
        cj["rhs"] = rhs / r.scale;
        uj["constraints"].push_back(std::move(cj));
        rhs_vec.push_back(rhs / r.scale);
      }
      uj["rhs"] = std::move(rhs_vec);
      pj["users"].push_back(std::move(uj));
    }
    points.push_back(std::move(pj));
  }

  const std::size_t nb = (std::size_t{1} << K) - 1;
  std::vector<double> bounds(nb);
  check(sobc_kuser_converse(s.get(), bounds.data(), bounds.size()));
  Table conv;
  conv.columns = {"mask", "users", "bound", "vacuous"};
  json cj = json::array();
  for (std::size_t i = 0; i < nb; ++i) {
    const auto mask = static_cast<std::uint32_t>(i + 1);
    const bool vacuous = std::isinf(bounds[i]);
    conv.rows.push_back({static_cast<std::int64_t>(mask), users_of(mask), bounds[i] / r.scale,
                         static_cast<std::int64_t>(vacuous ? 1 : 0)});
    json b = json::object();
    b["mask"] = mask;
    b["users"] = users_json(mask);
    b["bound"] = vacuous ? json(nullptr) : json(bounds[i] / r.scale);
    b["vacuous"] = vacuous;
    cj.push_back(std::move(b));
  }

  json meta = meta_of(r);
  meta["users"] = K;
  if (r.cfg.output.format == "json") {
    json data = json::object();
    data["achievable"] = std::move(points);
    data["converse"] = std::move(cj);
    write_json(file_in(r, "kuser"), meta, data);
  } else {
    write_csv(file_in(r, "kuser_achievable"), meta, ach);
    write_csv(file_in(r, "kuser_converse"), meta, conv);
  }
  return kExitOk;
}

int cmd_selftest() {
  int failed = 0;
  auto line = [&](const char* name, bool ok) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failed;
  };
  double v = 0.0;
  line("q_inv(1e-5)", sobc_q_inv(1e-5, &v) == SOBC_OK && std::abs(v - 4.2648907939228) < 1e-6);
  line("bvn_cdf(0,0,0.5)", sobc_bvn_cdf(0, 0, 0.5, &v) == SOBC_OK && std::abs(v - 1.0 / 3.0) < 1e-12);
  line("kappa(100,10,1e-5)", sobc_kappa(100, 10, 1e-5, &v) == SOBC_OK && std::abs(v - 0.8986230724) < 1e-8);

  sobc_scenario* raw = nullptr;
  bool ok = sobc_scenario_create(15, 10, 100, SOBC_GLOBAL, 1e-3, 0, &raw) == SOBC_OK;
  const ScenarioPtr s(raw);
  double r1 = 0, r2 = 0, sum = 0, ccp = 0;
  ok = ok && sobc_converse(s.get(), &r1, &r2, &sum) == SOBC_OK && sobc_ccp_sum_rate(s.get(), &ccp) == SOBC_OK;
  line("ccp below converse", ok && ccp < sum);
  sobc_search_options o;
  sobc_default_options(&o);
  o.alpha_grid = 16;
  o.beta_interior = 2;
  const double grid[3] = {0.2, 0.4, 0.6};
  sobc_boundary* b = nullptr;
  ok = ok && sobc_boundary_trace(s.get(), SOBC_SUPNORS, grid, 3, &o, SOBC_CLOUD_AUTO, &b) == SOBC_OK;
  const BoundaryPtr owned(b);
  bool inside = ok && sobc_boundary_size(b) == 3;
  for (std::size_t i = 0; inside && i < 3; ++i) {
    sobc_boundary_point p{};
    inside = sobc_boundary_point_at(b, i, &p) == SOBC_OK && p.r1 > 0 && p.r1 <= r1 && p.r1 + p.r2 <= sum + 1e-9;
  }
  line("supnors inside converse", inside);

  const double gk[2] = {15, 10};
  const double ek[1] = {1e-3};
  sobc_kuser* kr = nullptr;
  ok = sobc_kuser_create(gk, 2, 100, SOBC_GLOBAL, ek, nullptr, &kr) == SOBC_OK;
  const KUserPtr k(kr);
  double bounds[3] = {0, 0, 0};
  ok = ok && sobc_kuser_converse(k.get(), bounds, 3) == SOBC_OK;
  line("kuser converse matches two-user", ok && std::abs(bounds[0] - r1) < 1e-12 && std::abs(bounds[1] - r2) < 1e-12 &&
                                              std::abs(bounds[2] - sum) < 1e-12);
  const double gbad[7] = {1, 2, 3, 4, 5, 6, 7};
  sobc_kuser* none = nullptr;
  line("seven users refused", sobc_kuser_create(gbad, 7, 100, SOBC_GLOBAL, ek, nullptr, &none) == SOBC_UNSUPPORTED);
  return failed == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order rate regions for the Gaussian broadcast channel"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "scenario config (JSON)");
  app.add_option("--out", f.out, "output directory")->capture_default_str();
  app.add_option("--format", f.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--units", f.units, "nats|bits")->check(CLI::IsMember({"nats", "bits"}));
  app.add_option("--seed", f.seed, "seed for the quasi-Monte-Carlo integrator");
  app.add_flag("--hull", f.hull, "report the upper concave envelope of each boundary");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1, 1024));
  CLI::App* region = app.add_subcommand("region", "boundary polyline per scheme");
  CLI::App* params = app.add_subcommand("params", "optimal superposition parameters along the boundary");
  CLI::App* map = app.add_subcommand("map", "simplest-scheme classification map");
  CLI::App* kuser = app.add_subcommand("kuser", "K-user constraint vectors and converse bounds");
  CLI::App* selftest = app.add_subcommand("selftest", "quick numerical checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(kExitConfig, "invalid_argument", e.what());
  }

  if (selftest->parsed()) return cmd_selftest();

  Run r;
  try {
    if (f.config.empty()) throw ConfigError("--config", "required for this command");
    r.cfg = load_config(f.config);
    if (!f.format.empty()) r.cfg.output.format = f.format;
    if (!f.units.empty()) r.cfg.output.units = f.units;
    if (f.seed) r.cfg.search.seed = *f.seed;
    if (f.hull) r.cfg.output.convex_hull = true;
    if (f.threads) r.cfg.search.threads = *f.threads;
    r.out = f.out;
    r.scale = r.cfg.output.units == "bits" ? std::log(2.0) : 1.0;
    std::error_code ec;
    std::filesystem::create_directories(r.out, ec);
    if (!std::filesystem::is_directory(r.out)) throw ConfigError("--out", "cannot create output directory");

    if (region->parsed()) {
      r.command = "region";
      return cmd_region(r);
    }
    if (params->parsed()) {
      r.command = "params";
      return cmd_params(r);
    }
    if (map->parsed()) {
      r.command = "map";
      return cmd_map(r);
    }
    if (kuser->parsed()) {
      r.command = "kuser";
      return cmd_kuser(r);
    }
  } catch (const ConfigError& e) {
    return report(kExitConfig, "config", e.what(), e.path());
  } catch (const ApiError& e) {
    return report(exit_code_of(e.status), sobc_status_name(e.status), e.message);
  } catch (const std::exception& e) {
    return report(kExitNumerical, "internal", e.what());
  }
  return kExitConfig;
}
