#include "cnoma/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cnoma::reference {

double scaled_e1_integral(double x) {
  if (!(x > 0.0)) throw std::domain_error("scaled_e1_integral: x must be > 0");
  // Nearest singularity of the integrand is at s = ln x + i pi, so the
  // trapezoid error is ~exp(-2 pi^2 / h).
  const long double h = 0.05L;
  const long double lo = std::log(static_cast<long double>(x)) - 45.0L;
  const long double hi = 5.0L;
  const long double xl = x;
  long double sum = 0.0L;
  const long n = static_cast<long>((hi - lo) / h);
  for (long i = 0; i <= n; ++i) {
    const long double s = lo + h * i;
    const long double es = std::exp(s);
    sum += std::exp(-es) * es / (xl + es);
  }
  return static_cast<double>(sum * h);
}

double scaled_bessel_k_integral(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("scaled_bessel_k_integral: x must be > 0");
  const long double xl = x;
  // Peak width near t = 0 is ~1/sqrt(x).
  const long double h = std::min(0.02L, 0.25L / std::sqrt(xl));
  const long double t_max = std::acosh(1.0L + 800.0L / xl);
  long double sum = 0.5L;  // t = 0 carries half weight on the half line
  const long n = static_cast<long>(t_max / h) + 1;
  for (long i = 1; i <= n; ++i) {
    const long double t = h * i;
    sum += std::exp(-xl * (std::cosh(t) - 1.0L)) * std::cosh(static_cast<long double>(nu) * t);
  }
  return static_cast<double>(sum * h);
}

double e1_power_series(double x, int terms) {
  const long double xl = x;
  long double term = 1.0L;
  long double sum = 0.0L;
  for (int k = 1; k <= terms; ++k) {
    term *= -xl / k;
    sum += term / k;
  }
  constexpr long double euler = 0.577215664901532860606512090082402431L;
  return static_cast<double>(-euler - std::log(xl) - sum);
}

double e1_asymptotic(double x, int terms) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < terms; ++k) {
    const long double next = term * (-static_cast<long double>(k) / x);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
  }
  return static_cast<double>(std::exp(-static_cast<long double>(x)) / x * sum);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect: no sign change");
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cnoma::reference
