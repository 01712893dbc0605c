#include "cnoma/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cnoma/errors.hpp"

namespace cnoma {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 1000;

void require_positive(double x, const char* name) {
  if (!(x > 0.0)) throw DomainError(std::string(name) + ": argument must be > 0");
}

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!), used for x <= 1.
double e1_series(double x) {
  double term = 1.0;  // (-x)^k / k!
  double sum = 0.0;
  for (int k = 1; k < kMaxIterations; ++k) {
    term *= -x / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) < kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

// exp(x) E1(x) by the modified Lentz evaluation of the continued fraction
// 1/(x+1-) 1/(x+3-) 4/(x+5-) ..., used for x > 1.
double e1_scaled_fraction(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalFailure("gamma_upper_0: continued fraction did not converge at x=" +
                         std::to_string(x));
}

struct BesselPair {
  double k0;
  double k1;
};

// Power series about zero (Abramowitz & Stegun 9.6.13 and 9.6.11), x <= 2.
BesselPair bessel_k_series(double x) {
  const double y = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);

  // k-th terms: y^k / (k!)^2 and y^k / (k! (k+1)!)
  double t0 = 1.0;
  double t1 = 1.0;
  double harmonic = 0.0;  // H_k
  double i0 = 1.0;
  double i1_over_half_x = 1.0;
  double k0_tail = 0.0;
  double k1_tail = -2.0 * kEulerGamma + 1.0;  // psi(1) + psi(2)
  for (int k = 1; k < kMaxIterations; ++k) {
    t0 *= y / (static_cast<double>(k) * k);
    t1 *= y / (static_cast<double>(k) * (k + 1));
    harmonic += 1.0 / k;
    const double harmonic_next = harmonic + 1.0 / (k + 1);
    i0 += t0;
    i1_over_half_x += t1;
    k0_tail += harmonic * t0;
    k1_tail += (harmonic + harmonic_next - 2.0 * kEulerGamma) * t1;
    if (t0 < kEps * i0 && t1 < kEps * i1_over_half_x) break;
  }
  const double i1 = 0.5 * x * i1_over_half_x;
  BesselPair out;
  out.k0 = -(log_half + kEulerGamma) * i0 + k0_tail;
  out.k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_tail;
  return out;
}

// exp(x) K0(x), exp(x) K1(x) from Steed's evaluation of Temme's second
// continued fraction (order 0), x >= 2.
BesselPair bessel_k_scaled_fraction(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i < kMaxIterations; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i == kMaxIterations) {
    throw NumericalFailure("bessel_k: continued fraction did not converge at x=" +
                           std::to_string(x));
  }
  h *= a1;
  BesselPair out;
  out.k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  out.k1 = out.k0 * (x + 0.5 - h) / x;
  return out;
}

constexpr double kSeriesLimit = 2.0;

}  // namespace

double gamma_upper_0(double x) {
  require_positive(x, "gamma_upper_0");
  if (x <= 1.0) return e1_series(x);
  return e1_scaled_fraction(x) * std::exp(-x);
}

double gamma_upper_0_scaled(double x) {
  require_positive(x, "gamma_upper_0_scaled");
  if (x <= 1.0) return std::exp(x) * e1_series(x);
  return e1_scaled_fraction(x);
}

double bessel_k0(double x) {
  require_positive(x, "bessel_k0");
  if (x <= kSeriesLimit) return bessel_k_series(x).k0;
  return bessel_k_scaled_fraction(x).k0 * std::exp(-x);
}

double bessel_k1(double x) {
  require_positive(x, "bessel_k1");
  if (x <= kSeriesLimit) return bessel_k_series(x).k1;
  return bessel_k_scaled_fraction(x).k1 * std::exp(-x);
}

double bessel_k0_scaled(double x) {
  require_positive(x, "bessel_k0_scaled");
  if (x <= kSeriesLimit) return bessel_k_series(x).k0 * std::exp(x);
  return bessel_k_scaled_fraction(x).k0;
}

double bessel_k1_scaled(double x) {
  require_positive(x, "bessel_k1_scaled");
  if (x <= kSeriesLimit) return bessel_k_series(x).k1 * std::exp(x);
  return bessel_k_scaled_fraction(x).k1;
}

}  // namespace cnoma
