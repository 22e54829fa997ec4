#ifndef JOT_SPECIAL_HPP
#define JOT_SPECIAL_HPP

#include <string>
#include <vector>

namespace jot {

double log_gamma(double x);            // x > 0
double beta_fn(double a, double b);    // a, b > 0
// Regularized incomplete beta I_x(a,b), a,b > 0, x in [0,1].
double incomplete_beta(double a, double b, double x);

// Regularized incomplete gamma functions (used for chi-square and
// Poisson tail probabilities).
double gamma_p(double a, double x);  // lower
double gamma_q(double a, double x);  // upper

// Exponential integral E1(x), x > 0. Tail integral of the gamma-process
// Levy density is theta * E1(s).
double expint_e1(double x);

double poisson_pmf(long k, double rate);

// Name-based dispatch for the CLI surface.
double special_value(const std::string& kind, const std::vector<double>& args);

}  // namespace jot

#endif
