#include "cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace sobc_cli {

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(join(path, it.key()), "unknown key");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

double snr(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (x < 0.0) throw ConfigError(path, "SNR must be >= 0");
  return x;
}

double probability(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0 && x < 1.0)) throw ConfigError(path, "must lie in (0, 1)");
  return x;
}

std::int64_t integer(const json& v, const std::string& path, std::int64_t lo, std::int64_t hi) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  const std::int64_t x = v.get<std::int64_t>();
  if (x < lo || x > hi) {
    throw ConfigError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return x;
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string choice(const json& v, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  const std::string s = v.get<std::string>();
  std::string list;
  for (const char* a : allowed) {
    if (s == a) return s;
    list += list.empty() ? a : std::string("|") + a;
  }
  throw ConfigError(path, "expected one of " + list);
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> snr_axis(const json& v, const std::string& path) {
  if (v.is_array()) {
    std::vector<double> out = number_list(v, path);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i] < 0.0) throw ConfigError(path + "[" + std::to_string(i) + "]", "SNR must be >= 0");
    }
    return out;
  }
  only_keys(v, path, {"min", "max", "points"});
  if (!v.contains("min") || !v.contains("max") || !v.contains("points")) {
    throw ConfigError(path, "range needs min, max and points");
  }
  const double lo = snr(v["min"], path + ".min");
  const double hi = snr(v["max"], path + ".max");
  const auto m = static_cast<std::size_t>(integer(v["points"], path + ".points", 1, 200));
  if (hi < lo) throw ConfigError(path, "max < min");
  if (m == 1) return {lo};
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
  out.back() = hi;
  return out;
}

ErrorSpec error_spec(const json& v, const std::string& path, std::size_t users) {
  only_keys(v, path, {"model", "eps"});
  if (!v.contains("model")) throw ConfigError(path + ".model", "missing");
  if (!v.contains("eps")) throw ConfigError(path + ".eps", "missing");
  ErrorSpec e;
  if (choice(v["model"], path + ".model", {"global", "per_user"}) == "global") {
    e.kind = SOBC_GLOBAL;
    e.eps = {probability(v["eps"], path + ".eps")};
    return e;
  }
  e.kind = SOBC_PER_USER;
  const json& a = v["eps"];
  if (!a.is_array() || a.size() != users) {
    throw ConfigError(path + ".eps", "per_user needs an array of " + std::to_string(users) + " values");
  }
  for (std::size_t i = 0; i < users; ++i) e.eps.push_back(probability(a[i], path + ".eps[" + std::to_string(i) + "]"));
  return e;
}

void parse_scenario(const json& v, ScenarioSpec& s) {
  only_keys(v, "scenario", {"gamma1", "gamma2", "n", "error", "cloud"});
  s.present = true;
  if (v.contains("gamma1") != v.contains("gamma2")) throw ConfigError("scenario", "give both gamma1 and gamma2");
  if (v.contains("gamma1")) {
    s.has_gammas = true;
    s.gamma1 = snr(v["gamma1"], "scenario.gamma1");
    s.gamma2 = snr(v["gamma2"], "scenario.gamma2");
  }
  if (!v.contains("n")) throw ConfigError("scenario.n", "missing");
  s.n = integer(v["n"], "scenario.n", 1, std::numeric_limits<std::int64_t>::max());
  if (!v.contains("error")) throw ConfigError("scenario.error", "missing");
  s.error = error_spec(v["error"], "scenario.error", 2);
  if (v.contains("cloud")) {
    const std::string c = choice(v["cloud"], "scenario.cloud", {"auto", "user1", "user2"});
    s.cloud = c == "user1" ? SOBC_CLOUD_USER1 : c == "user2" ? SOBC_CLOUD_USER2 : SOBC_CLOUD_AUTO;
  }
}

void parse_search(const json& v, sobc_search_options& o) {
  only_keys(v, "search", {"alpha_grid", "beta_interior", "eps_grid", "tdm_grid", "refinement_rounds", "tolerance",
                          "seed", "threads"});
  const std::int64_t big = 100000;
  if (v.contains("alpha_grid")) o.alpha_grid = integer(v["alpha_grid"], "search.alpha_grid", 2, big);
  if (v.contains("beta_interior")) o.beta_interior = integer(v["beta_interior"], "search.beta_interior", 0, big);
  if (v.contains("eps_grid")) o.eps_grid = integer(v["eps_grid"], "search.eps_grid", 2, big);
  if (v.contains("tdm_grid")) o.tdm_grid = integer(v["tdm_grid"], "search.tdm_grid", 2, big);
  if (v.contains("refinement_rounds")) {
    o.refinement_rounds = integer(v["refinement_rounds"], "search.refinement_rounds", 0, 100);
  }
  if (v.contains("tolerance")) {
    o.tolerance = number(v["tolerance"], "search.tolerance");
    if (!(o.tolerance > 0.0)) throw ConfigError("search.tolerance", "must be > 0");
  }
  if (v.contains("seed")) {
    if (!v["seed"].is_number_unsigned()) throw ConfigError("search.seed", "expected an unsigned integer");
    o.seed = v["seed"].get<std::uint64_t>();
  }
  if (v.contains("threads")) o.threads = integer(v["threads"], "search.threads", 1, 1024);
}

void parse_grid(const json& v, GridSpec& g) {
  only_keys(v, "grid", {"r2_points", "r2_values"});
  if (v.contains("r2_points") && v.contains("r2_values")) throw ConfigError("grid", "give r2_points or r2_values");
  if (v.contains("r2_points")) g.r2_points = integer(v["r2_points"], "grid.r2_points", 1, 100000);
  if (v.contains("r2_values")) {
    g.r2_values = number_list(v["r2_values"], "grid.r2_values");
    for (std::size_t i = 0; i < g.r2_values.size(); ++i) {
      const std::string p = "grid.r2_values[" + std::to_string(i) + "]";
      if (g.r2_values[i] < 0.0) throw ConfigError(p, "must be >= 0");
      if (i > 0 && !(g.r2_values[i] > g.r2_values[i - 1])) throw ConfigError(p, "values must increase");
    }
  }
}

void parse_output(const json& v, OutputSpec& o) {
  only_keys(v, "output", {"units", "format", "convex_hull"});
  if (v.contains("units")) o.units = choice(v["units"], "output.units", {"nats", "bits"});
  if (v.contains("format")) o.format = choice(v["format"], "output.format", {"csv", "json"});
  if (v.contains("convex_hull")) o.convex_hull = boolean(v["convex_hull"], "output.convex_hull");
}

void parse_map(const json& v, MapSpec& m) {
  only_keys(v, "map", {"gamma1", "gamma2", "r2_points", "match_tolerance"});
  m.present = true;
  if (!v.contains("gamma1")) throw ConfigError("map.gamma1", "missing");
  if (!v.contains("gamma2")) throw ConfigError("map.gamma2", "missing");
  m.gamma1 = snr_axis(v["gamma1"], "map.gamma1");
  m.gamma2 = snr_axis(v["gamma2"], "map.gamma2");
  if (m.gamma1.size() > 200) throw ConfigError("map.gamma1", "at most 200 values");
  if (m.gamma2.size() > 200) throw ConfigError("map.gamma2", "at most 200 values");
  if (v.contains("r2_points")) m.r2_points = integer(v["r2_points"], "map.r2_points", 2, 100000);
  if (v.contains("match_tolerance")) {
    m.match_tolerance = number(v["match_tolerance"], "map.match_tolerance");
    if (!(m.match_tolerance > 0.0)) throw ConfigError("map.match_tolerance", "must be > 0");
  }
}

void parse_kuser(const json& v, KUserSpec& k) {
  only_keys(v, "kuser", {"gammas", "n", "error", "alphas", "ordering", "eps_allocation"});
  k.present = true;
  if (!v.contains("gammas")) throw ConfigError("kuser.gammas", "missing");
  k.gammas = number_list(v["gammas"], "kuser.gammas");
  const std::size_t users = k.gammas.size();
  // the library refuses more than six users; that is reported with its own message
  if (users < 2) throw ConfigError("kuser.gammas", "need at least 2 users");
  for (std::size_t i = 0; i < users; ++i) {
    if (!(k.gammas[i] > 0.0)) throw ConfigError("kuser.gammas[" + std::to_string(i) + "]", "SNR must be > 0");
  }
  if (!v.contains("n")) throw ConfigError("kuser.n", "missing");
  k.n = integer(v["n"], "kuser.n", 1, std::numeric_limits<std::int64_t>::max());
  if (!v.contains("error")) throw ConfigError("kuser.error", "missing");
  k.error = error_spec(v["error"], "kuser.error", users);

  if (!v.contains("alphas")) throw ConfigError("kuser.alphas", "missing");
  const json& a = v["alphas"];
  if (a.is_array()) {
    if (a.empty()) throw ConfigError("kuser.alphas", "expected a non-empty array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string p = "kuser.alphas[" + std::to_string(i) + "]";
      std::vector<double> row = number_list(a[i], p);
      if (row.size() != users) throw ConfigError(p, "needs one value per user");
      double sum = 0.0;
      for (double x : row) {
        if (x < 0.0) throw ConfigError(p, "power fractions must be >= 0");
        sum += x;
      }
      if (sum > 1.0 + 1e-12) throw ConfigError(p, "power fractions sum above 1");
      k.alphas.push_back(std::move(row));
    }
  } else {
    only_keys(a, "kuser.alphas", {"simplex_steps"});
    if (!a.contains("simplex_steps")) throw ConfigError("kuser.alphas.simplex_steps", "missing");
    const auto steps = static_cast<std::size_t>(integer(a["simplex_steps"], "kuser.alphas.simplex_steps", 1, 64));
    k.alphas = simplex_grid(users, steps);
    if (k.alphas.empty()) throw ConfigError("kuser.alphas.simplex_steps", "too few steps for the number of users");
  }

  if (v.contains("ordering")) {
    const json& o = v["ordering"];
    if (!o.is_array() || o.size() != users) throw ConfigError("kuser.ordering", "needs one entry per user");
    std::vector<bool> seen(users, false);
    for (std::size_t i = 0; i < users; ++i) {
      const std::string p = "kuser.ordering[" + std::to_string(i) + "]";
      const auto u = static_cast<std::size_t>(integer(o[i], p, 1, static_cast<std::int64_t>(users)));
      if (seen[u - 1]) throw ConfigError(p, "repeated user");
      seen[u - 1] = true;
      k.ordering.push_back(u - 1);
    }
  }
  if (v.contains("eps_allocation")) {
    const json& e = v["eps_allocation"];
    if (!e.is_array() || e.size() != users) throw ConfigError("kuser.eps_allocation", "needs one value per user");
    for (std::size_t i = 0; i < users; ++i) {
      k.eps_allocation.push_back(probability(e[i], "kuser.eps_allocation[" + std::to_string(i) + "]"));
    }
  }
}

}  // namespace

Config parse_config(const json& doc) {
  only_keys(doc, "", {"scenario", "schemes", "grid", "search", "output", "map", "kuser"});
  Config c;
  c.source = doc;
  sobc_default_options(&c.search);
  if (doc.contains("scenario")) parse_scenario(doc["scenario"], c.scenario);
  if (doc.contains("schemes")) {
    const json& s = doc["schemes"];
    if (!s.is_array() || s.empty()) throw ConfigError("schemes", "expected a non-empty array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string p = "schemes[" + std::to_string(i) + "]";
      if (!s[i].is_string()) throw ConfigError(p, "expected a string");
      sobc_scheme sc{};
      if (sobc_scheme_from_name(s[i].get<std::string>().c_str(), &sc) != SOBC_OK) {
        throw ConfigError(p, "unknown scheme, expected SUP|SUPNORS|CCP|TDM|CONVERSE");
      }
      if (std::find(c.schemes.begin(), c.schemes.end(), sc) != c.schemes.end()) throw ConfigError(p, "repeated");
      c.schemes.push_back(sc);
    }
  }
  if (doc.contains("grid")) parse_grid(doc["grid"], c.grid);
  if (doc.contains("search")) parse_search(doc["search"], c.search);
  if (doc.contains("output")) parse_output(doc["output"], c.output);
  if (doc.contains("map")) parse_map(doc["map"], c.map);
  if (doc.contains("kuser")) parse_kuser(doc["kuser"], c.kuser);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

namespace {

void compositions(std::size_t k, std::size_t left, std::vector<std::size_t>& parts,
                  std::vector<std::vector<double>>& out, std::size_t steps) {
  if (parts.size() + 1 == k) {
    parts.push_back(left);
    std::vector<double> row;
    for (std::size_t p : parts) row.push_back(static_cast<double>(p) / static_cast<double>(steps));
    out.push_back(std::move(row));
    parts.pop_back();
    return;
  }
  const std::size_t rest = k - parts.size() - 1;
  for (std::size_t p = 1; p + rest <= left; ++p) {
    parts.push_back(p);
    compositions(k, left - p, parts, out, steps);
    parts.pop_back();
  }
}

}  // namespace

std::vector<std::vector<double>> simplex_grid(std::size_t k, std::size_t steps) {
  std::vector<std::vector<double>> out;
  if (k == 0 || steps < k) return out;
  std::vector<std::size_t> parts;
  compositions(k, steps, parts, out, steps);
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string csv_cell(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return "";
}

json json_cell(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    return std::isfinite(v) ? json(v) : json(nullptr);
  }
  if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void write_csv(const std::string& path, const json& meta, const Table& t) {
  std::ostringstream os;
  for (auto it = meta.begin(); it != meta.end(); ++it) {
    os << "# " << it.key() << "=" << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
  write_text(path, os.str());
}

json table_rows(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_json(const std::string& path, const json& meta, const json& data) {
  json doc = json::object();
  doc["meta"] = meta;
  doc["data"] = data;
  write_text(path, doc.dump(2) + "\n");
}

std::vector<HullPoint> upper_hull(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < m; ++i) {
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2];
      const std::size_t b = h.back();
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross > 0.0) {
        h.pop_back();
      } else {
        break;
      }
    }
    h.push_back(i);
  }
  std::vector<HullPoint> out(m);
  for (std::size_t v : h) out[v] = HullPoint{y[v], true};
  for (std::size_t s = 0; s + 1 < h.size(); ++s) {
    const std::size_t a = h[s];
    const std::size_t b = h[s + 1];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double t = (x[i] - x[a]) / (x[b] - x[a]);
      out[i] = HullPoint{y[a] + t * (y[b] - y[a]), false};
    }
  }
  return out;
}

}  // namespace sobc_cli
