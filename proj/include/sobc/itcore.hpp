#pragma once

// Point-to-point Gaussian quantities used by every region: capacity,
// dispersions, the normal approximation kappa, and the probability of correct
// decoding for the two-step (cloud then satellite) decoder.
//
// All rates are in nats per channel use.

#include <cstdint>

#include "sobc/specfun.hpp"

namespace sobc {

/// Linear (not dB) signal-to-noise ratio, P / sigma^2.
class Snr {
 public:
  explicit Snr(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Number of channel uses, n >= 1.
class Blocklength {
 public:
  explicit Blocklength(std::int64_t n);
  std::int64_t value() const noexcept { return n_; }

 private:
  std::int64_t n_;
};

/// Error probability in [0, 1].
class Reliability {
 public:
  explicit Reliability(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// C(x) = ln(1 + x) / 2.
double capacity(double x);

/// V(x, y) = x (2 + y) / (2 (1 + x)(1 + y)) for 0 <= x <= y.
double cross_dispersion(double x, double y);

/// V(x) = V(x, x).
double dispersion(double x);

/// V'(x, y) = V(x) + V(y) - 2 V(x, y), the dispersion of the cloud-center
/// rate when the satellite is treated as noise. Evaluated in factored form.
double cloud_dispersion(double x, double y);

/// Correlation between the satellite and full-codeword information densities
/// at the strong receiver, sqrt(alpha (2 + gamma) / (2 + alpha gamma)).
double corr_coeff(double alpha, double gamma);

/// kappa(n, x, eps) = C(x) - sqrt(V(x) / n) Q^{-1}(eps). May be negative.
double kappa(std::int64_t n, double x, double eps);

/// `mean - sqrt(disp / n) * Q^{-1}(eps)` with the eps corners resolved as
/// limits: eps <= 0 gives -inf and eps >= 1 gives +inf unless disp == 0, in
/// which case the penalty vanishes.
double penalized_rate(double mean, double disp, std::int64_t n, double eps);

/// Q^{-1} with the corner conventions eps <= 0 -> +inf sentinel and
/// eps >= 1 -> -inf sentinel.
double quantile_with_sentinels(double eps);

/// F(eps_sat, eps_cc; r): probability that both decoding steps at the strong
/// receiver succeed.
double correct_decode_F(double eps_sat, double eps_cc, double r);

/// 1 - F(eps_sat, eps_cc; r), computed as a union bound minus the joint
/// failure mass so that small error probabilities keep relative precision.
double decoding_error(double eps_sat, double eps_cc, double r);

/// Smallest eps such that mean - sqrt(disp/n) Q^{-1}(eps) >= level, i.e.
/// Q((mean - level) sqrt(n / disp)). Returns 0 when level <= 0 (rates are
/// clamped at zero so the demand is vacuous) and +inf when disp == 0 and the
/// mean falls short.
double required_reliability(double mean, double disp, std::int64_t n, double level);

struct RemainderConstants {
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
};

/// Constants multiplying the neglected 1/sqrt(n) remainder of the
/// achievability bound, reported for diagnostics only.
RemainderConstants remainder_constants(double gamma1, double gamma2);

}  // namespace sobc
