#include "sobc/itcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sobc/errors.hpp"

namespace sobc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_snr(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": SNR must be finite and >= 0, got " + std::to_string(x));
  }
}

void require_ordered(double x, double y, const char* what) {
  require_snr(x, what);
  require_snr(y, what);
  if (x > y) throw DomainError(std::string(what) + ": requires x <= y");
}

}  // namespace

Snr::Snr(double value) : value_(value) { require_snr(value, "Snr"); }

Blocklength::Blocklength(std::int64_t n) : n_(n) {
  if (n < 1) throw DomainError("blocklength must be >= 1");
}

Reliability::Reliability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw DomainError("reliability must lie in [0, 1]");
}

double capacity(double x) {
  require_snr(x, "capacity");
  return 0.5 * std::log1p(x);
}

double cross_dispersion(double x, double y) {
  require_ordered(x, y, "cross_dispersion");
  return x * (2.0 + y) / (2.0 * (1.0 + x) * (1.0 + y));
}

double dispersion(double x) {
  require_snr(x, "dispersion");
  return x * (2.0 + x) / (2.0 * (1.0 + x) * (1.0 + x));
}

double cloud_dispersion(double x, double y) {
  require_ordered(x, y, "cloud_dispersion");
  const double num = (y - x) * (2.0 * x * y + 3.0 * x + y + 2.0);
  const double den = 2.0 * (1.0 + x) * (1.0 + x) * (1.0 + y) * (1.0 + y);
  return num / den;
}

double corr_coeff(double alpha, double gamma) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("corr_coeff: alpha must lie in [0, 1]");
  require_snr(gamma, "corr_coeff");
  return std::sqrt(alpha * (2.0 + gamma) / (2.0 + alpha * gamma));
}

double kappa(std::int64_t n, double x, double eps) {
  if (n < 1) throw DomainError("kappa: n must be >= 1");
  require_snr(x, "kappa");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("kappa: eps must lie in (0, 1)");
  return capacity(x) - std::sqrt(dispersion(x) / static_cast<double>(n)) * specfun::q_inv(eps);
}

double penalized_rate(double mean, double disp, std::int64_t n, double eps) {
  if (disp <= 0.0) return mean;
  if (eps <= 0.0) return -kInf;
  if (eps >= 1.0) return kInf;
  return mean - std::sqrt(disp / static_cast<double>(n)) * specfun::q_inv(eps);
}

double quantile_with_sentinels(double eps) {
  if (eps <= 0.0) return 2.0 * specfun::kInfiniteBound;
  if (eps >= 1.0) return -2.0 * specfun::kInfiniteBound;
  return specfun::q_inv(eps);
}

double correct_decode_F(double eps_sat, double eps_cc, double r) {
  if (!(eps_sat >= 0.0 && eps_sat <= 1.0) || !(eps_cc >= 0.0 && eps_cc <= 1.0)) {
    throw DomainError("correct_decode_F: reliabilities must lie in [0, 1]");
  }
  return specfun::bvn_cdf(quantile_with_sentinels(eps_sat), quantile_with_sentinels(eps_cc),
                          specfun::Correlation(r));
}

double decoding_error(double eps_sat, double eps_cc, double r) {
  if (!(eps_sat >= 0.0 && eps_sat <= 1.0) || !(eps_cc >= 0.0 && eps_cc <= 1.0)) {
    throw DomainError("decoding_error: reliabilities must lie in [0, 1]");
  }
  // Pr[A > q_sat or B > q_cc] = eps_sat + eps_cc - Pr[A > q_sat, B > q_cc].
  const double joint = specfun::bvn_upper(quantile_with_sentinels(eps_sat),
                                          quantile_with_sentinels(eps_cc), specfun::Correlation(r));
  return std::clamp(eps_sat + eps_cc - joint, 0.0, 1.0);
}

double required_reliability(double mean, double disp, std::int64_t n, double level) {
  if (level <= 0.0) return 0.0;
  if (disp <= 0.0) return mean >= level ? 0.0 : kInf;
  const double z = (mean - level) * std::sqrt(static_cast<double>(n) / disp);
  return specfun::q_tail(z);
}

RemainderConstants remainder_constants(double gamma1, double gamma2) {
  require_snr(gamma1, "remainder_constants");
  require_snr(gamma2, "remainder_constants");
  constexpr double pi = std::numbers::pi;
  constexpr double e = std::numbers::e;
  // K0 is stated in two forms upstream: 27 sqrt(pi e / 8) in the lemma and
  // 27 sqrt(pi / 8) where it is later used. We take the first (larger by
  // sqrt(e)); the discrepancy is not resolved here.
  RemainderConstants out;
  out.k0 = 27.0 * std::sqrt(pi * e / 8.0) * (1.0 + 2.0 * gamma1) / std::sqrt(1.0 + 4.0 * gamma1);
  auto kj = [&](double g) { return 27.0 * std::sqrt(pi / 8.0) * (1.0 + g) / std::sqrt(1.0 + 2.0 * g); };
  out.k1 = kj(gamma1);
  out.k2 = kj(gamma2);
  return out;
}

}  // namespace sobc
