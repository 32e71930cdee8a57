#pragma once

// Two-user second-order regions: superposition with and without rate
// splitting, concatenate-and-code (CCP), time division (TDM) and the cut-set
// converse, under a global or a per-user error criterion.
//
// Boundaries are traced as R1 = max achievable given R2, over a caller grid of
// R2 values. Only achievable grid points are listed.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sobc/itcore.hpp"
#include "sobc/optimize.hpp"

namespace sobc {

enum class ErrorKind { Global, PerUser };

class ErrorModel {
 public:
  static ErrorModel global(double eps);
  static ErrorModel per_user(double eps1, double eps2);

  ErrorKind kind() const noexcept { return kind_; }
  /// Global: the common eps. PerUser: the bound for `user` (1 or 2).
  double eps_for(int user) const;
  double global_eps() const;

 private:
  ErrorModel(ErrorKind kind, double e1, double e2) : kind_(kind), e1_(e1), e2_(e2) {}
  ErrorKind kind_;
  double e1_;
  double e2_;
};

class ChannelScenario2 {
 public:
  ChannelScenario2(double gamma1, double gamma2, std::int64_t n, ErrorModel model);

  double gamma(int user) const;
  double gamma1() const noexcept { return gamma1_; }
  double gamma2() const noexcept { return gamma2_; }
  std::int64_t n() const noexcept { return n_; }
  const ErrorModel& model() const noexcept { return model_; }

 private:
  double gamma1_;
  double gamma2_;
  std::int64_t n_;
  ErrorModel model_;
};

/// Which user's message forms the cloud center. That user decodes the cloud
/// only; the other decodes cloud and satellite.
enum class CloudUser { User1 = 1, User2 = 2 };

inline int cloud_index(CloudUser c) noexcept { return static_cast<int>(c); }
inline int strong_index(CloudUser c) noexcept { return 3 - static_cast<int>(c); }
inline CloudUser other(CloudUser c) noexcept { return c == CloudUser::User1 ? CloudUser::User2 : CloudUser::User1; }

/// Lower-SNR user in the cloud; ties put user 2 in the cloud.
CloudUser capacity_ordering(const ChannelScenario2& s) noexcept;

struct SupParams {
  CloudUser cloud = CloudUser::User2;
  double alpha = 0.0;          // satellite power fraction
  double beta = 0.0;           // share of the strong user's rate carried in the cloud
  double eps_sat = 0.0;        // eps10
  double eps_cc_strong = 0.0;  // eps11
  double eps_weak = 0.0;       // eps2
};

struct RateConstraintSet2 {
  double cc = 0.0;
  double sat = 0.0;
  double sum = 0.0;
};

/// Right-hand sides of the three superposition bounds, each clamped at 0.
/// `r0` is a common-message rate subtracted from the cloud and sum bounds.
RateConstraintSet2 sup_constraints(const ChannelScenario2& s, const SupParams& p, double r0 = 0.0);

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;
  bool feasible = false;
};

/// Corner of the fixed-parameter region. The cloud user's rate is
/// `cloud_rate` if given, else the largest it can be; the other user then gets
/// the largest rate consistent with the three bounds.
RatePair sup_rate_pair(const ChannelScenario2& s, const SupParams& p,
                       std::optional<double> cloud_rate = std::nullopt);

struct ReliabilityCheck {
  double eps_strong = 0.0;  // 1 - F(eps10, eps11; r) at the two-step decoder
  bool feasible = false;
};

ReliabilityCheck reliability_feasible(const ChannelScenario2& s, const SupParams& p);

struct SupSolution {
  bool feasible = false;
  double r1 = 0.0;
  SupParams params;
};

/// Largest R1 for a fixed R2 and fixed (cloud, alpha, beta). The reliability
/// allocation is the smallest one that supports the rates, so this is exact up
/// to the bisection tolerance on R1.
SupSolution sup_solve(const ChannelScenario2& s, CloudUser cloud, double alpha, double beta, double r2);

enum class Scheme { Sup, SupNoRs, Ccp, Tdm, Converse };

std::string_view scheme_name(Scheme s) noexcept;
std::optional<Scheme> scheme_from_name(std::string_view name) noexcept;

struct TdmParams {
  double tau2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

struct BoundaryPoint {
  double r2 = 0.0;
  double r1 = 0.0;
  std::optional<SupParams> sup;
  std::optional<TdmParams> tdm;
};

struct RegionBoundary {
  Scheme scheme = Scheme::Sup;
  std::vector<BoundaryPoint> points;

  /// R1 at exactly this R2, if the grid point is achievable.
  std::optional<double> r1_at(double r2) const;
};

/// Single-user normal approximation for `user` at its own error bound.
double single_user_rate(const ChannelScenario2& s, int user);

/// `points` values of R2 evenly spaced on [0, single_user_rate(s, 2)].
std::vector<double> default_r2_grid(const ChannelScenario2& s, std::size_t points);

/// Full superposition region. With `cloud` unset the global model uses the
/// capacity ordering and the per-user model takes the union of both.
RegionBoundary boundary_sup(const ChannelScenario2& s, const std::vector<double>& r2_grid,
                            const SearchOptions& opts, std::optional<CloudUser> cloud = std::nullopt);

/// Superposition with beta = 0.
RegionBoundary boundary_supnors(const ChannelScenario2& s, const std::vector<double>& r2_grid,
                                const SearchOptions& opts, std::optional<CloudUser> cloud = std::nullopt);

struct CcpSolution {
  double sum_rate = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

CcpSolution ccp_solution(const ChannelScenario2& s);
double ccp_sum_rate(const ChannelScenario2& s);
RegionBoundary boundary_ccp(const ChannelScenario2& s, const std::vector<double>& r2_grid);

struct TdmSolution {
  bool feasible = false;
  double r1 = 0.0;
  TdmParams params;
};

/// Largest R1 for a fixed R2 and fixed (tau2, tau2 * alpha2).
TdmSolution tdm_solve(const ChannelScenario2& s, double tau2, double power2, double r2);

RegionBoundary boundary_tdm(const ChannelScenario2& s, const std::vector<double>& r2_grid,
                            const SearchOptions& opts);

struct ConverseRegion2 {
  double r1 = 0.0;
  double r2 = 0.0;
  double sum = 0.0;
  bool sum_vacuous = false;  // sum-bound error >= 1; `sum` then holds +inf
};

ConverseRegion2 converse_region(const ChannelScenario2& s);
RegionBoundary boundary_converse(const ChannelScenario2& s, const std::vector<double>& r2_grid);

/// Pointwise max over both orderings; requires the per-user model. Ties keep
/// the capacity ordering.
RegionBoundary peruser_union_boundary(const ChannelScenario2& s, const std::vector<double>& r2_grid,
                                      const SearchOptions& opts);

}  // namespace sobc
