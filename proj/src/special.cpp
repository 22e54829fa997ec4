#include "jot/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jot {

double log_gamma(double x) {
  if (!(x > 0)) throw std::invalid_argument("log_gamma: argument must be > 0");
  return std::lgamma(x);
}

double beta_fn(double a, double b) {
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("beta_fn: both arguments must be > 0");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace {

// Continued fraction for I_x(a,b) (Lentz), valid for x < (a+1)/(a+b+2).
double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) return h;
  }
  throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("incomplete_beta: a and b must be > 0");
  if (!(x >= 0.0) || !(x <= 1.0))
    throw std::invalid_argument("incomplete_beta: x must be in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lnfront = a * std::log(x) + b * std::log1p(-x) -
                         (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(lnfront) * betacf(a, b, x) / a;
  return 1.0 - std::exp(lnfront) * betacf(b, a, 1.0 - x) / b;
}

double gamma_p(double a, double x) {
  if (!(a > 0) || x < 0) throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    // series
    double sum = 1.0 / a, term = sum, ap = a;
    for (int n = 0; n < 1000; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16)
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p: series did not converge");
  }
  return 1.0 - gamma_q(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0) || x < 0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p(a, x);
  // continued fraction (Lentz)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("gamma_q: continued fraction did not converge");
}

double expint_e1(double x) {
  if (!(x > 0)) throw std::invalid_argument("expint_e1: argument must be > 0");
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x + sum (-1)^{n+1} x^n / (n n!)
    const double euler = 0.57721566490153286060651209;
    double sum = 0.0, term = 1.0;
    for (int n = 1; n <= 60; ++n) {
      term *= -x / n;
      sum -= term / n;
      if (std::fabs(term / n) < 1e-18) break;
    }
    return -euler - std::log(x) + sum;
  }
  // continued fraction E1(x) = e^{-x} / (x + 1/(1 + 1/(x + 2/(1 + ...))))
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

double poisson_pmf(long k, double rate) {
  if (k < 0 || rate < 0) throw std::invalid_argument("poisson_pmf: bad arguments");
  if (rate == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(rate) - rate - std::lgamma(k + 1.0));
}

double special_value(const std::string& kind, const std::vector<double>& args) {
  if (kind == "log_gamma") {
    if (args.size() != 1) throw std::invalid_argument("log_gamma expects 1 argument");
    return log_gamma(args[0]);
  }
  if (kind == "beta_fn") {
    if (args.size() != 2) throw std::invalid_argument("beta_fn expects 2 arguments");
    return beta_fn(args[0], args[1]);
  }
  if (kind == "incomplete_beta") {
    if (args.size() != 3)
      throw std::invalid_argument("incomplete_beta expects 3 arguments");
    return incomplete_beta(args[0], args[1], args[2]);
  }
  throw std::invalid_argument("unknown special function: " + kind);
}

}  // namespace jot
