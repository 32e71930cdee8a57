#pragma once

// Config ingestion and table output for the command-line tool.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sobc/sobc.h"

namespace sobc_cli {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& msg) : std::runtime_error(msg), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ErrorSpec {
  sobc_error_kind kind = SOBC_GLOBAL;
  std::vector<double> eps;  // one value for global, one per user otherwise
};

struct ScenarioSpec {
  bool present = false;
  bool has_gammas = false;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  std::int64_t n = 0;
  ErrorSpec error;
  sobc_cloud cloud = SOBC_CLOUD_AUTO;
};

struct GridSpec {
  std::size_t r2_points = 40;
  std::vector<double> r2_values;  // overrides r2_points when non-empty
};

struct OutputSpec {
  std::string units = "nats";
  std::string format = "csv";
  bool convex_hull = false;
};

struct MapSpec {
  bool present = false;
  std::vector<double> gamma1;
  std::vector<double> gamma2;
  std::size_t r2_points = 24;
  double match_tolerance = 1e-4;
};

struct KUserSpec {
  bool present = false;
  std::vector<double> gammas;
  std::int64_t n = 0;
  ErrorSpec error;
  std::vector<std::vector<double>> alphas;
  std::vector<std::size_t> ordering;   // 0-based, empty for default
  std::vector<double> eps_allocation;  // empty for default
};

struct Config {
  ScenarioSpec scenario;
  std::vector<sobc_scheme> schemes;
  GridSpec grid;
  sobc_search_options search{};
  OutputSpec output;
  MapSpec map;
  KUserSpec kuser;
  json source;
};

Config parse_config(const json& doc);
Config load_config(const std::string& path);

// Compositions of `steps` into k parts, scaled by 1/steps, strictly positive parts only.
std::vector<std::vector<double>> simplex_grid(std::size_t k, std::size_t steps);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v);

void write_csv(const std::string& path, const json& meta, const Table& t);
void write_json(const std::string& path, const json& meta, const json& data);
json table_rows(const Table& t);

// Upper concave envelope of (x, y) with x increasing. Returns, for each input,
// the envelope height at its x and whether the point is a vertex.
struct HullPoint {
  double y = 0.0;
  bool vertex = false;
};
std::vector<HullPoint> upper_hull(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sobc_cli
