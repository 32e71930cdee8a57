#pragma once

// Standard-normal machinery: the Gaussian tail Q(x), its inverse, the
// bivariate normal CDF, and a quasi-Monte-Carlo rectangle probability for
// small multivariate normals.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sobc::specfun {

/// Integration limits with magnitude at or above this value are treated as
/// infinite. Callers use it to encode the eps = 0 / eps = 1 corners.
inline constexpr double kInfiniteBound = 1e9;

/// True for +/-inf and for the finite sentinel magnitudes above.
bool is_infinite_bound(double x) noexcept;

/// Correlation coefficient in [-1, 1].
class Correlation {
 public:
  explicit Correlation(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Symmetric positive semidefinite matrix, row-major.
class CovarianceMatrix {
 public:
  /// Throws DomainError when `entries` is not dim*dim, not symmetric (1e-12
  /// relative), or has a negative eigenvalue below -1e-10 * trace.
  CovarianceMatrix(std::size_t dim, std::vector<double> entries);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * dim_ + j]; }
  const std::vector<double>& entries() const noexcept { return entries_; }
  double trace() const noexcept;

  /// Lower-triangular factor L with L L^T = V. Zero pivots stay zero.
  std::vector<double> cholesky() const;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

/// Q(x) = Pr[G > x] for G standard normal.
double q_tail(double x);

/// Phi(x) = 1 - Q(x), evaluated without cancellation.
double normal_cdf(double x);

/// Inverse of q_tail on (0, 1).
double q_inv(double eps);

/// Pr[A <= h, B <= k] for a standard bivariate normal with correlation rho.
/// Infinite sentinels are accepted for h and k.
double bvn_cdf(double h, double k, Correlation rho);

/// Pr[A > h, B > k]; same conventions as bvn_cdf. Small upper-orthant masses
/// keep their relative accuracy here, unlike 1 - bvn_cdf(...).
double bvn_upper(double h, double k, Correlation rho);

struct MvnEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

inline constexpr std::uint64_t kDefaultMvnSeed = 0x5eed5eedULL;
inline constexpr std::size_t kMaxMvnDim = 8;

/// Pr[lower <= Z <= upper] for Z ~ N(0, V), by separation of variables over a
/// randomly shifted rank-1 lattice. Deterministic for a fixed seed.
MvnEstimate mvn_rect(std::span<const double> lower, std::span<const double> upper,
                     const CovarianceMatrix& V, std::uint64_t seed = kDefaultMvnSeed);

}  // namespace sobc::specfun
