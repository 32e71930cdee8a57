#pragma once

// Optimizer plumbing shared by the region tracers and the search drivers.

#include <cstddef>
#include <cstdint>
#include <functional>

#include "sobc/specfun.hpp"

namespace sobc {

struct SearchOptions {
  std::size_t alpha_grid = 64;
  std::size_t beta_interior = 16;   // beta grid is {0} + interior + {1}
  std::size_t eps_grid = 48;        // per axis, log-spaced, for optimize_reliability
  std::size_t tdm_grid = 64;        // per axis over (tau2, tau2 * alpha2)
  std::size_t refinement_rounds = 3;
  double tolerance = 1e-5;          // nats
  std::uint64_t rng_seed = specfun::kDefaultMvnSeed;
  std::size_t threads = 1;

  /// Throws DomainError when a grid is below 2 points or tolerance <= 0.
  void validate() const;
};

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximisation of f on [lo, hi]. Stops when the bracket is
/// narrower than `xtol`. Unimodality is not checked.
GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double xtol, std::size_t max_iter = 80);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions are
/// rethrown on the calling thread (first one wins).
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace sobc
