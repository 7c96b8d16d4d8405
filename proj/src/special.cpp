#include "osn/special.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "osn/error.hpp"

namespace osn {

namespace {

// lower incomplete gamma by series, returns P(a,x)
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// upper incomplete gamma by modified Lentz continued fraction, returns Q(a,x)
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw Error("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_tail(double statistic, std::uint64_t df) {
  if (df == 0) throw Error("chi_square_tail: zero degrees of freedom");
  if (statistic <= 0.0) return 1.0;
  return gamma_q(static_cast<double>(df) / 2.0, statistic / 2.0);
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

double binomial_tail(std::uint64_t n, double p, std::uint64_t i0) {
  if (p < 0.0 || p > 1.0) throw Error("binomial_tail: p must lie in [0,1]");
  if (i0 > n) throw Error("binomial_tail: need i0 <= n");
  if (i0 == 0) return 1.0;
  if (p == 0.0) return 0.0;          // i0 >= 1 here
  if (p == 1.0) return 1.0;          // all mass at i = n >= i0

  // log-sum-exp over log C(n,i) + i log p + (n-i) log(1-p)
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  logs.reserve(n - i0 + 1);
  for (std::uint64_t i = i0; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double dn = static_cast<double>(n);
    const double lg = lgn - std::lgamma(di + 1.0) - std::lgamma(dn - di + 1.0) +
                      di * lp + (dn - di) * lq;
    logs.push_back(lg);
    max_log = std::max(max_log, lg);
  }
  double sum = 0.0;
  for (double lg : logs) sum += std::exp(lg - max_log);
  return std::min(1.0, std::exp(max_log) * sum);
}

}  // namespace osn
