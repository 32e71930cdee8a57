#pragma once

// K-user superposition (no rate splitting) and the K-user cut-set converse.
//
// Users are given in any order. Internally they are ranked, by default by
// decreasing SNR; the user of rank j decodes the messages of ranks j..K.
// Every input and output vector here is indexed by physical user (0-based).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sobc/specfun.hpp"

namespace sobc {

inline constexpr std::size_t kMaxUsers = 6;

class ErrorModelK {
 public:
  static ErrorModelK global(double eps);
  static ErrorModelK per_user(std::vector<double> eps);

  bool is_global() const noexcept { return global_; }
  double global_eps() const;
  /// Per-user bound; for the global model this is the global eps.
  double eps_for(std::size_t user) const;
  std::size_t size() const noexcept { return eps_.size(); }

 private:
  ErrorModelK(bool global, std::vector<double> eps) : global_(global), eps_(std::move(eps)) {}
  bool global_;
  std::vector<double> eps_;
};

class ChannelScenarioK {
 public:
  /// 2 <= K <= kMaxUsers (UnsupportedError above), all SNRs > 0. `order`
  /// lists physical users from rank 0 up; empty means decreasing SNR.
  ChannelScenarioK(std::vector<double> gammas, std::int64_t n, ErrorModelK model,
                   std::vector<std::size_t> order = {});

  std::size_t users() const noexcept { return gammas_.size(); }
  double gamma(std::size_t user) const { return gammas_.at(user); }
  const std::vector<double>& gammas() const noexcept { return gammas_; }
  std::int64_t n() const noexcept { return n_; }
  const ErrorModelK& model() const noexcept { return model_; }

  /// Physical users by rank (SNR ties keep input order).
  const std::vector<std::size_t>& by_rank() const noexcept { return by_rank_; }
  std::size_t rank_of(std::size_t user) const { return rank_of_.at(user); }

 private:
  std::vector<double> gammas_;
  std::int64_t n_;
  ErrorModelK model_;
  std::vector<std::size_t> by_rank_;
  std::vector<std::size_t> rank_of_;
};

/// alphas[u] is the power fraction of user u's codeword; sum <= 1.
struct PowerSplitK {
  std::vector<double> alphas;
};

struct UserDispersion {
  std::size_t user = 0;
  /// Physical users whose rates enter entry i: ranks rank(user)..rank(user)+i.
  std::vector<std::vector<std::size_t>> sums;
  std::vector<double> mu;
  specfun::CovarianceMatrix V{1, {0.0}};
};

UserDispersion kuser_moments(const ChannelScenarioK& s, const PowerSplitK& a, std::size_t user);

struct UserBounds {
  std::size_t user = 0;
  std::vector<std::vector<std::size_t>> sums;
  std::vector<double> rhs;  // clamped at 0
  double shift = 0.0;       // t with Pr[Z <= t d] = 1 - eps
  double mvn_std_error = 0.0;
};

struct KUserAchievable {
  bool feasible = false;
  std::vector<UserBounds> users;  // physical order
};

/// Constraint right-hand sides mu_j - t d_j / sqrt(n) for each user, where
/// d_j is `directions[u]` if given (entries >= 0) and sqrt(diag V_j) if not.
/// Infeasible (flag unset, `users` empty) when the allocation violates the
/// error model.
KUserAchievable kuser_achievable_point(const ChannelScenarioK& s, const PowerSplitK& a,
                                       const std::vector<double>& eps_alloc,
                                       const std::optional<std::vector<std::vector<double>>>& directions = std::nullopt,
                                       std::uint64_t seed = specfun::kDefaultMvnSeed);

/// Equal split of the error budget: (1 - eps_j) = (1 - eps)^(1/K) for the
/// global model, the per-user bounds otherwise.
std::vector<double> default_eps_allocation(const ChannelScenarioK& s);

struct SubsetBound {
  std::uint32_t mask = 0;  // bit u set when physical user u is in the subset
  double bound = 0.0;      // +inf when vacuous
  bool vacuous = false;
};

/// All 2^K - 1 subset-sum bounds, ordered by mask.
std::vector<SubsetBound> kuser_converse(const ChannelScenarioK& s);

}  // namespace sobc
