#include "cnoma/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "cnoma/errors.hpp"

namespace cnoma {

namespace {

// Kronrod abscissae on [-1, 1] (positive half, descending) and weights.
// Odd-indexed abscissae are the 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr std::size_t kMaxPanels = 20000;

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  int depth;

  bool operator<(const Panel& other) const { return error < other.error; }
};

class Integrand {
public:
  Integrand(const std::function<double(double)>& f, double lo, double hi, const QuadratureSpec& spec)
      : f_(f), lo_(lo), hi_(hi), infinite_(std::isinf(hi)), spec_(spec) {}

  // Integrand on the reference interval u in [0, 1].
  double operator()(double u) {
    ++evaluations;
    double jac = 1.0;
    double s = u;
    if (spec_.singular_lo && (spec_.singular_hi && !infinite_)) {
      s = u * u * (3.0 - 2.0 * u);
      jac = 6.0 * u * (1.0 - u);
    } else if (spec_.singular_lo) {
      s = u * u;
      jac = 2.0 * u;
    } else if (spec_.singular_hi && !infinite_) {
      const double v = 1.0 - u;
      s = 1.0 - v * v;
      jac = 2.0 * v;
    }
    double x;
    if (infinite_) {
      const double rest = 1.0 - s;
      x = lo_ + s / rest;
      jac /= rest * rest;
    } else {
      x = lo_ + (hi_ - lo_) * s;
      jac *= (hi_ - lo_);
    }
    if (jac == 0.0) return 0.0;
    const double y = f_(x);
    if (!std::isfinite(y)) {
      throw NonFiniteSample("integrate: non-finite integrand value at x=" + std::to_string(x));
    }
    return y * jac;
  }

  std::size_t evaluations = 0;

private:
  const std::function<double(double)>& f_;
  double lo_;
  double hi_;
  bool infinite_;
  const QuadratureSpec& spec_;
};

Panel gauss_kronrod(Integrand& g, double lo, double hi, int depth) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = g(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double sum = g(center - dx) + g(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  Panel p{lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), depth};
  // Below roundoff the difference carries no information.
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(p.value);
  p.error = std::max(p.error, floor);
  return p;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureSpec& spec) {
  if (!(lo < hi) || std::isnan(lo) || std::isinf(lo)) {
    throw InvalidArgument("integrate: require finite lo < hi");
  }
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_depth < 1) {
    throw InvalidArgument("integrate: tolerances must be > 0 and max_depth >= 1");
  }

  Integrand g(f, lo, hi, spec);
  std::priority_queue<Panel> active;
  std::vector<Panel> retired;

  active.push(gauss_kronrod(g, 0.0, 1.0, 0));
  double value = active.top().value;
  double error = active.top().error;

  auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(value)); };

  while (!active.empty() && error > tolerance() && active.size() + retired.size() < kMaxPanels) {
    Panel worst = active.top();
    active.pop();
    if (worst.depth >= spec.max_depth) {
      retired.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = gauss_kronrod(g, worst.lo, mid, worst.depth + 1);
    const Panel right = gauss_kronrod(g, mid, worst.hi, worst.depth + 1);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
  }

  // Re-sum to remove drift from the running updates.
  QuadratureResult result;
  std::vector<Panel> all = std::move(retired);
  while (!active.empty()) {
    all.push_back(active.top());
    active.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  for (const Panel& p : all) {
    result.value += p.value;
    result.error += p.error;
  }
  result.converged = result.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(result.value));
  result.evaluations = g.evaluations;
  return result;
}

}  // namespace cnoma
