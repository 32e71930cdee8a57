#include "sobc/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "sobc/errors.hpp"

namespace sobc::specfun {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Acklam's rational approximation of Phi^{-1}(p); relative error ~1.15e-9.
double acklam_inverse_cdf(double p) {
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Phi^{-1} for the QMC inner loop: no refinement, clamped to the double range
// where Phi is distinguishable from 0 and 1.
double fast_inverse_cdf(double p) {
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  return acklam_inverse_cdf(p);
}

// Genz's BVNU: Pr[X > h, Y > k] for finite h, k and |r| < 1.
double genz_bvnu(double h, double k, double r) {
  static constexpr std::array<std::array<double, 10>, 3> w = {{
      {0.1713244923791705, 0.3607615730481384, 0.4679139345726904},
      {0.04717533638651177, 0.1069393259953183, 0.1600783285433464, 0.2031674267230659,
       0.2334925365383547, 0.2491470458134029},
      {0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
       0.1019301198172404, 0.1181945319615184, 0.1316886384491766, 0.1420961093183821,
       0.1491729864726037, 0.1527533871307259},
  }};
  static constexpr std::array<std::array<double, 10>, 3> x = {{
      {-0.9324695142031522, -0.6612093864662647, -0.238619186083197},
      {-0.9815606342467191, -0.904117256370475, -0.769902674194305, -0.5873179542866171,
       -0.3678314989981802, -0.1252334085114692},
      {-0.9931285991850949, -0.9639719272779138, -0.9122344282513259, -0.8391169718222188,
       -0.7463319064601508, -0.636053680726515, -0.5108670019508271, -0.3737060887154196,
       -0.2277858511416451, -0.07652652113349733},
  }};

  std::size_t ng = 0;
  std::size_t lg = 3;
  if (std::fabs(r) >= 0.3 && std::fabs(r) < 0.75) {
    ng = 1;
    lg = 6;
  } else if (std::fabs(r) >= 0.75) {
    ng = 2;
    lg = 10;
  }

  double hk = h * k;
  double bvn = 0.0;
  if (std::fabs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r);
    for (std::size_t i = 0; i < lg; ++i) {
      double sn = std::sin(asr * (x[ng][i] + 1.0) / 2.0);
      bvn += w[ng][i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      sn = std::sin(asr * (-x[ng][i] + 1.0) / 2.0);
      bvn += w[ng][i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
    }
    return bvn * asr / (2.0 * kTwoPi) + normal_cdf(-h) * normal_cdf(-k);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::fabs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-(bs / as + hk) / 2.0) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (hk > -160.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * normal_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (std::size_t i = 0; i < lg; ++i) {
      double xs = (a * (x[ng][i] + 1.0)) * (a * (x[ng][i] + 1.0));
      double rs = std::sqrt(1.0 - xs);
      bvn += a * w[ng][i] *
             (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs -
              std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
      xs = as * (1.0 - x[ng][i]) * (1.0 - x[ng][i]) / 4.0;
      rs = std::sqrt(1.0 - xs);
      bvn += a * w[ng][i] * std::exp(-(bs / xs + hk) / 2.0) *
             (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs - (1.0 + c * xs * (1.0 + d * xs)));
    }
    bvn = -bvn / kTwoPi;
  }
  if (r > 0.0) {
    bvn += normal_cdf(-std::max(h, k));
  } else {
    bvn = -bvn + std::max(0.0, normal_cdf(-h) - normal_cdf(-k));
  }
  return bvn;
}

void require_finite_or_sentinel(double v, const char* name) {
  if (std::isnan(v)) throw DomainError(std::string(name) + " is NaN");
}

}  // namespace

bool is_infinite_bound(double x) noexcept { return std::isinf(x) || std::fabs(x) >= kInfiniteBound; }

Correlation::Correlation(double value) : value_(value) {
  if (!(value >= -1.0 && value <= 1.0)) {
    throw DomainError("correlation must lie in [-1, 1], got " + std::to_string(value));
  }
}

CovarianceMatrix::CovarianceMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0 || entries_.size() != dim_ * dim_) {
    throw DomainError("covariance matrix must be dim x dim");
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw DomainError("covariance entries must be finite");
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const double a = (*this)(i, j);
      const double b = (*this)(j, i);
      const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
      if (std::fabs(a - b) > 1e-12 * scale) throw DomainError("covariance matrix is not symmetric");
    }
  }
  // Pivots of the factorization bound the smallest eigenvalue from above, so
  // a strongly negative pivot certifies indefiniteness.
  const double tol = 1e-10 * std::max(trace(), 1e-300);
  std::vector<double> a = entries_;
  for (std::size_t j = 0; j < dim_; ++j) {
    double pivot = a[j * dim_ + j];
    for (std::size_t k = 0; k < j; ++k) pivot -= a[j * dim_ + k] * a[j * dim_ + k];
    if (pivot < -tol) throw DomainError("covariance matrix is not positive semidefinite");
    const double l = pivot > tol ? std::sqrt(pivot) : 0.0;
    a[j * dim_ + j] = l;
    for (std::size_t i = j + 1; i < dim_; ++i) {
      double s = a[i * dim_ + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * dim_ + k] * a[j * dim_ + k];
      a[i * dim_ + j] = l > 0.0 ? s / l : 0.0;
      if (l == 0.0 && std::fabs(s) > std::sqrt(tol) * 1e3) {
        throw DomainError("covariance matrix is not positive semidefinite");
      }
    }
  }
}

double CovarianceMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<double> CovarianceMatrix::cholesky() const {
  const double tol = 1e-10 * std::max(trace(), 1e-300);
  std::vector<double> l(dim_ * dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    double pivot = (*this)(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l[j * dim_ + k] * l[j * dim_ + k];
    const double ljj = pivot > tol ? std::sqrt(pivot) : 0.0;
    l[j * dim_ + j] = ljj;
    for (std::size_t i = j + 1; i < dim_; ++i) {
      double s = (*this)(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * dim_ + k] * l[j * dim_ + k];
      l[i * dim_ + j] = ljj > 0.0 ? s / ljj : 0.0;
    }
  }
  return l;
}

double q_tail(double x) {
  if (std::isnan(x) || std::isinf(x)) throw DomainError("q_tail requires a finite argument");
  return 0.5 * std::erfc(x / kSqrt2);
}

double normal_cdf(double x) {
  if (std::isnan(x)) throw DomainError("normal_cdf of NaN");
  return 0.5 * std::erfc(-x / kSqrt2);
}

double q_inv(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("q_inv requires eps in (0, 1), got " + std::to_string(eps));
  }
  // Solve Phi(y) = eps with y = -Q^{-1}(eps); Phi(y) is evaluated through the
  // lower tail so small eps keeps full relative precision.
  double y = acklam_inverse_cdf(eps);
  // below ~1e-300 Phi(y) is subnormal and the correction is noise
  if (eps < 1e-300) return -y;
  for (int iter = 0; iter < 2; ++iter) {
    const double e = normal_cdf(y) - eps;
    const double u = e * std::sqrt(kTwoPi) * std::exp(y * y / 2.0);
    y = y - u / (1.0 + y * u / 2.0);
  }
  return -y;
}

double bvn_upper(double h, double k, Correlation rho) {
  require_finite_or_sentinel(h, "h");
  require_finite_or_sentinel(k, "k");
  const double r = rho.value();
  const bool h_inf = is_infinite_bound(h);
  const bool k_inf = is_infinite_bound(k);
  if ((h_inf && h > 0) || (k_inf && k > 0)) return 0.0;
  if (h_inf && k_inf) return 1.0;
  if (h_inf) return normal_cdf(-k);
  if (k_inf) return normal_cdf(-h);
  if (r == 0.0) return normal_cdf(-h) * normal_cdf(-k);
  if (r >= 1.0) return normal_cdf(-std::max(h, k));
  if (r <= -1.0) return std::max(0.0, normal_cdf(-h) - normal_cdf(k));
  return std::clamp(genz_bvnu(h, k, r), 0.0, 1.0);
}

double bvn_cdf(double h, double k, Correlation rho) {
  require_finite_or_sentinel(h, "h");
  require_finite_or_sentinel(k, "k");
  const double r = rho.value();
  const bool h_inf = is_infinite_bound(h);
  const bool k_inf = is_infinite_bound(k);
  if ((h_inf && h < 0) || (k_inf && k < 0)) return 0.0;
  if (h_inf && k_inf) return 1.0;
  if (h_inf) return normal_cdf(k);
  if (k_inf) return normal_cdf(h);
  if (r == 0.0) return normal_cdf(h) * normal_cdf(k);
  if (r >= 1.0) return normal_cdf(std::min(h, k));
  if (r <= -1.0) return std::max(0.0, normal_cdf(h) + normal_cdf(k) - 1.0);
  return bvn_upper(-h, -k, rho);
}

MvnEstimate mvn_rect(std::span<const double> lower, std::span<const double> upper,
                     const CovarianceMatrix& V, std::uint64_t seed) {
  const std::size_t m = V.dim();
  if (m > kMaxMvnDim) throw UnsupportedError("mvn_rect supports dimension <= 8");
  if (lower.size() != m || upper.size() != m) throw DomainError("mvn_rect: bound sizes do not match V");
  for (std::size_t i = 0; i < m; ++i) {
    require_finite_or_sentinel(lower[i], "lower");
    require_finite_or_sentinel(upper[i], "upper");
    if (lower[i] > upper[i]) throw DomainError("mvn_rect: lower > upper");
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto lim = [](double v) {
    if (is_infinite_bound(v)) return v > 0 ? kInf : -kInf;
    return v;
  };
  auto cdf_of = [](double z) {
    if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
    return normal_cdf(z);
  };
  auto pdf_of = [](double z) { return std::isinf(z) ? 0.0 : std::exp(-0.5 * z * z) / std::sqrt(kTwoPi); };

  std::array<double, kMaxMvnDim> a{};
  std::array<double, kMaxMvnDim> b{};
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = lim(lower[i]);
    b[i] = lim(upper[i]);
  }
  std::vector<double> S(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) S[i * m + j] = V(i, j);

  // Cholesky with the most constrained variable first (Genz-Bretz ordering),
  // using truncated means of the variables already placed.
  const double tol = 1e-10 * std::max(V.trace(), 1e-300);
  std::vector<double> L(m * m, 0.0);
  std::array<double, kMaxMvnDim> y{};
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t pick = i;
    double pick_p = kInf;
    for (std::size_t j = i; j < m; ++j) {
      double var = S[j * m + j];
      double s = 0.0;
      for (std::size_t k = 0; k < i; ++k) {
        var -= L[j * m + k] * L[j * m + k];
        s += L[j * m + k] * y[k];
      }
      const double sd = var > tol ? std::sqrt(var) : 0.0;
      const double p = sd > 0.0 ? cdf_of((b[j] - s) / sd) - cdf_of((a[j] - s) / sd) : (a[j] <= s && s <= b[j] ? 1.0 : 0.0);
      if (p < pick_p) {
        pick_p = p;
        pick = j;
      }
    }
    if (pick != i) {
      std::swap(a[i], a[pick]);
      std::swap(b[i], b[pick]);
      for (std::size_t k = 0; k < m; ++k) std::swap(S[i * m + k], S[pick * m + k]);
      for (std::size_t k = 0; k < m; ++k) std::swap(S[k * m + i], S[k * m + pick]);
      for (std::size_t k = 0; k < i; ++k) std::swap(L[i * m + k], L[pick * m + k]);
    }
    double var = S[i * m + i];
    double s = 0.0;
    for (std::size_t k = 0; k < i; ++k) {
      var -= L[i * m + k] * L[i * m + k];
      s += L[i * m + k] * y[k];
    }
    const double lii = var > tol ? std::sqrt(var) : 0.0;
    L[i * m + i] = lii;
    for (std::size_t l = i + 1; l < m; ++l) {
      double v = S[l * m + i];
      for (std::size_t k = 0; k < i; ++k) v -= L[l * m + k] * L[i * m + k];
      L[l * m + i] = lii > 0.0 ? v / lii : 0.0;
    }
    if (lii > 0.0) {
      const double lo = (a[i] - s) / lii;
      const double hi = (b[i] - s) / lii;
      const double p = cdf_of(hi) - cdf_of(lo);
      y[i] = p > 1e-300 ? (pdf_of(lo) - pdf_of(hi)) / p : (std::isinf(lo) ? hi : lo);
    } else {
      y[i] = 0.0;
    }
  }

  // Probability of one interval given the already-sampled prefix z[0..i).
  auto interval = [&](std::size_t i, const std::array<double, kMaxMvnDim>& z, double& d, double& e) {
    double s = 0.0;
    for (std::size_t j = 0; j < i; ++j) s += L[i * m + j] * z[j];
    const double lii = L[i * m + i];
    if (lii == 0.0) {
      const bool inside = a[i] <= s && s <= b[i];
      d = 0.0;
      e = inside ? 1.0 : 0.0;
      return;
    }
    d = cdf_of((a[i] - s) / lii);
    e = cdf_of((b[i] - s) / lii);
  };

  std::array<double, kMaxMvnDim> z{};
  double d0 = 0.0;
  double e0 = 0.0;
  interval(0, z, d0, e0);
  if (m == 1) return {std::max(0.0, e0 - d0), 0.0};
  if (m == 2 && L[0] > 0.0 && L[3] > 0.0 && std::isinf(a[0]) && std::isinf(a[1])) {
    const double s0 = std::sqrt(S[0]);
    const double s1 = std::sqrt(S[3]);
    const double rho = std::clamp(S[1] / (s0 * s1), -1.0, 1.0);
    auto bound = [](double v, double sd) { return std::isinf(v) ? (v > 0 ? 2.0 * kInfiniteBound : -2.0 * kInfiniteBound) : v / sd; };
    return {bvn_cdf(bound(b[0], s0), bound(b[1], s1), Correlation(rho)), 0.0};
  }

  // Richtmyer generators sqrt(prime) mod 1, baker-transformed. The lattice
  // grows until the shift-to-shift spread is small next to min(P, 1 - P).
  static constexpr std::array<double, kMaxMvnDim> primes = {2, 3, 5, 7, 11, 13, 17, 19};
  std::array<double, kMaxMvnDim> gen{};
  for (std::size_t i = 0; i < kMaxMvnDim; ++i) gen[i] = std::sqrt(primes[i]);
  constexpr std::size_t kShifts = 12;
  constexpr std::size_t kMaxPoints = std::size_t{1} << 15;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::array<std::array<double, kMaxMvnDim>, kShifts> shifts{};
  for (auto& sh : shifts)
    for (std::size_t i = 0; i + 1 < m; ++i) sh[i] = unif(rng);
  std::array<double, kShifts> acc{};

  MvnEstimate out;
  std::size_t done = 0;
  for (std::size_t points = 4096;; points *= 2) {
    for (std::size_t s = 0; s < kShifts; ++s) {
      for (std::size_t p = done + 1; p <= points; ++p) {
        double f = e0 - d0;
        double d = d0;
        double e = e0;
        for (std::size_t i = 0; i + 1 < m && f > 0.0; ++i) {
          double u = std::fmod(static_cast<double>(p) * gen[i] + shifts[s][i], 1.0);
          u = std::fabs(2.0 * u - 1.0);
          z[i] = L[i * m + i] == 0.0 ? 0.0 : fast_inverse_cdf(d + u * (e - d));
          interval(i + 1, z, d, e);
          f *= (e - d);
        }
        acc[s] += f;
      }
    }
    done = points;
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t s = 0; s < kShifts; ++s) {
      const double est = acc[s] / static_cast<double>(points);
      const double delta = est - mean;
      mean += delta / static_cast<double>(s + 1);
      m2 += delta * (est - mean);
    }
    out.value = std::clamp(mean, 0.0, 1.0);
    out.std_error = std::sqrt(m2 / static_cast<double>(kShifts - 1) / static_cast<double>(kShifts));
    const double scale = std::min(out.value, 1.0 - out.value);
    if (out.std_error <= std::max(1e-14, 1e-3 * scale) || points >= kMaxPoints) break;
  }
  return out;
}

}  // namespace sobc::specfun
