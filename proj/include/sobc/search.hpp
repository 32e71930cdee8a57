#pragma once

// Search drivers: a generic reliability-allocation optimizer, the boundary
// dispatcher, and the "simplest scheme" classification maps.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "sobc/optimize.hpp"
#include "sobc/regions2.hpp"

namespace sobc {

struct ReliabilityAllocation {
  double eps_sat = 0.0;        // eps10
  double eps_cc_strong = 0.0;  // eps11
  double eps_weak = 0.0;       // eps2
};

struct ReliabilityOptimum {
  bool feasible = false;
  ReliabilityAllocation alloc;
  double value = 0.0;
};

using ReliabilityObjective = std::function<double(const ReliabilityAllocation&)>;

/// Maximises `objective` over allocations admitted by the scenario's error
/// model for the superposition decoder with parameters (cloud, alpha). The
/// admissible set is mapped onto a unit cube of budget shares (weak user, then
/// eps10, then eps11 up to what the strong decoder can still afford); each
/// share is scanned on {0} plus a log grid and refined by coordinate-wise
/// golden section in log scale. Throws InfeasibleError when the objective is
/// -inf everywhere on the grid.
ReliabilityOptimum optimize_reliability(const ReliabilityObjective& objective, const ChannelScenario2& s,
                                        CloudUser cloud, double alpha, const SearchOptions& opts);

/// Dispatches to the regions2 tracers. For SUP and SUPNORS under the per-user
/// model both orderings are searched.
RegionBoundary trace_boundary(Scheme scheme, const ChannelScenario2& s, const std::vector<double>& r2_grid,
                              const SearchOptions& opts);

enum class SchemeLabel { None, SupNoRs, Sup, Ccp, Sup1, Sup2 };

std::string_view label_name(SchemeLabel l) noexcept;

struct ClassifyOptions {
  std::int64_t n = 100;
  ErrorModel model = ErrorModel::global(0.1);
  std::size_t r2_points = 24;
  double match_tolerance = 1e-4;  // nats, per boundary point
  SearchOptions search;
};

/// Label of a single channel pair.
///
/// The floor ln(n)/n restricts the comparison to rate pairs where both users
/// get a meaningful rate. Labels, simplest first:
///   CCP      concatenate-and-code alone reaches the best boundary
///   NONE     capacity-ordered superposition without splitting suffices, or
///            no rate pair clears the floor
///   SUPNORS  (per-user) superposition without splitting, best of both orderings
///   SUP-1/2  (per-user) full superposition with user 1 / user 2 in the cloud
///   SUP      needs the union of the above
SchemeLabel classify_cell(double gamma1, double gamma2, const ClassifyOptions& opts);

struct ClassificationCell {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  SchemeLabel label = SchemeLabel::None;
};

struct SchemeClassification {
  std::vector<double> gamma1_values;
  std::vector<double> gamma2_values;
  std::vector<ClassificationCell> cells;  // gamma1 outer, gamma2 inner
  bool symmetric = false;                 // global model: label(g1, g2) == label(g2, g1)
};

/// Evaluates every cell of the product grid. Under the global model each
/// unordered pair is evaluated once with the stronger user as user 1.
SchemeClassification classify_schemes(const std::vector<double>& gamma1_values,
                                      const std::vector<double>& gamma2_values, const ClassifyOptions& opts);

}  // namespace sobc
