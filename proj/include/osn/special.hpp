#pragma once

#include <cstdint>

namespace osn {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
/// a > 0, x >= 0. Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double x);

/// Chi-square upper tail P(X >= statistic) with `df` degrees of freedom.
double chi_square_tail(double statistic, std::uint64_t df);

/// Kolmogorov asymptotic tail Q_KS(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_tail(double lambda);

/// Upper binomial tail sum_{i>=i0} C(n,i) p^i (1-p)^{n-i}, evaluated in log
/// space so extreme tails keep precision.
double binomial_tail(std::uint64_t n, double p, std::uint64_t i0);

}  // namespace osn
