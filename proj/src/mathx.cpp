#include "v2x/mathx.hpp"

#include <cmath>
#include <stdexcept>

namespace v2x {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955125739;

// erf via the all-positive series erf(x) = (2x/sqrt(pi)) e^{-x^2}
// sum_k (2x^2)^k / (1*3*...*(2k+1)); good for moderate x.
double erf_series(double x) {
  const double tx = 2.0 * x * x;
  double term = 1.0;
  double sum = 1.0;
  double denom = 1.0;
  for (int k = 1; k < 200; ++k) {
    denom = 2.0 * k + 1.0;
    term *= tx / denom;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return kTwoOverSqrtPi * x * std::exp(-x * x) * sum;
}

// Continued fraction (modified Lentz) for erfc(x), x >= 2:
// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...))))
double erfc_cf(double x) {
  const double tiny = 1e-300;
  double b = x;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 300; ++i) {
    const double a = 0.5 * i;
    b = x;
    d = 1.0 / (b + a * d);
    c = b + a / c;
    if (c == 0.0) c = tiny;
    const double delta = c * d;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / std::sqrt(M_PI) * h;
}

}  // namespace

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < 2.0) return 1.0 - erf_series(x);
  if (x > 27.5) return 0.0;  // below double underflow of e^{-x^2}
  return erfc_cf(x);
}

double inv_erfc(double x) {
  if (!(x > 0.0) || !(x < 2.0)) {
    throw std::domain_error("inv_erfc: argument must lie in (0, 2)");
  }
  if (x == 1.0) return 0.0;
  // erfc(-y) = 2 - erfc(y); reduce to the positive branch.
  if (x > 1.0) return -inv_erfc(2.0 - x);

  // Bracket [lo, hi] with erfc(hi) <= x <= erfc(lo).
  double lo = 0.0, hi = 1.0;
  while (erfc(hi) > x) {
    lo = hi;
    hi *= 2.0;
    if (hi > 40.0) break;  // erfc(40) == 0 in double; x>0 keeps us left of it
  }
  for (int i = 0; i < 120; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (erfc(mid) > x) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * (1.0 + hi)) break;
  }
  double y = 0.5 * (lo + hi);
  // A few Newton polishing steps: d/dy erfc(y) = -2/sqrt(pi) e^{-y^2}.
  for (int i = 0; i < 3; ++i) {
    const double f = erfc(y) - x;
    const double dfdy = -kTwoOverSqrtPi * std::exp(-y * y);
    if (dfdy == 0.0) break;
    const double step = f / dfdy;
    const double yn = y - step;
    if (yn >= lo && yn <= hi) y = yn;
  }
  return y;
}

std::uint64_t rng_poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 30.0) {
    // Knuth: multiply uniforms until the product drops below e^{-mean}.
    const double l = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= rng_u01(rng);
    } while (p > l);
    return k - 1;
  }
  // Hormann's PTRS transformed rejection, exact for mean >= ~10.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = rng_u01(rng) - 0.5;
    double v = rng_u01(rng);
    if (v == 0.0) continue;
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace v2x
