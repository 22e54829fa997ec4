#ifndef JOT_LEVY_HPP
#define JOT_LEVY_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "jot/rng.hpp"

namespace jot {

enum class LevyFamily {
  scale_invariant,  // theta / s on (0,1]
  stable,           // c s^{-1-alpha} on (0,inf)
  beta_process,     // c s^{-1-alpha} (1-s)^{alpha-1} on (0,1)
  stable_beta,      // c/B(theta+alpha,1-alpha) s^{-alpha-1}(1-s)^{theta+alpha-1}
  gamma,            // theta s^{-1} e^{-s} on (0,inf)
  custom,
  derived,          // conditional / scaled / posterior transforms
};

// A Levy density with its tail integral Lambda(s) = int_s^hi lambda(u) du
// and right-continuous inverse. Closed forms are installed where the
// family admits them; otherwise the tail is integrated numerically and
// the inverse obtained by bisection on a monotone tail table.
class LevyDensity {
 public:
  static LevyDensity scale_invariant(double theta);
  static LevyDensity stable(double c, double alpha);
  static LevyDensity beta_process(double c, double alpha);
  static LevyDensity stable_beta(double c, double theta, double alpha);
  // stable-beta with the alpha-prefactor normalization
  // alpha s^{-alpha-1} (1-s)^{theta+alpha-1}.
  static LevyDensity stable_beta_simple(double alpha, double theta);
  static LevyDensity gamma_process(double theta);
  static LevyDensity custom(std::function<double(double)> density, double lo,
                            double hi, std::string label = "custom");

  double density(double s) const;   // 0 outside support
  double tail(double s) const;      // Lambda(s)
  double inv_tail(double t) const;  // Lambda^-(t)
  bool has_closed_tail() const;

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  LevyFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  const std::string& label() const { return label_; }

  // Expected mass of jumps below s: int_lo^s u lambda(u) du.
  double mass_below(double s) const;

 private:
  friend LevyDensity make_derived(std::function<double(double)>, double, double,
                                  std::function<double(double)>,
                                  std::function<double(double)>, std::string);
  LevyDensity() = default;
  void check_integrability() const;
  void build_table() const;

  std::function<double(double)> density_;
  std::function<double(double)> closed_tail_;      // empty when numeric
  std::function<double(double)> closed_inv_tail_;  // empty when numeric
  double lo_ = 0.0, hi_ = 1.0;
  LevyFamily family_ = LevyFamily::custom;
  std::vector<double> params_;
  std::string label_;

  struct TailTable;
  mutable std::shared_ptr<TailTable> table_;
};

// Internal factory for transformed densities (conditional, scaled,
// posterior). Closed tail/inverse may be empty.
LevyDensity make_derived(std::function<double(double)> density, double lo,
                         double hi, std::function<double(double)> closed_tail,
                         std::function<double(double)> closed_inv_tail,
                         std::string label);

struct TruncationRule {
  enum class Mode { fixed_count, relative_floor, tail_mass };
  Mode mode = Mode::relative_floor;
  double value = 1e-6;      // K, epsilon, or tau
  double reference = 0.0;   // relative_floor reference; 0 = first jump
  static TruncationRule fixed_count(long k);
  static TruncationRule relative_floor(double eps, double reference = 0.0);
  static TruncationRule tail_mass(double tau);
};

struct RankedJumps {
  std::vector<double> jumps;  // strictly decreasing
  long count = 0;
  double tail_mass_bound = 0.0;
};

// Density of the largest jump, lambda(s) exp(-Lambda(s)); 0 outside support.
double largest_jump_pdf(const LevyDensity& lv, double s);

// M_k = Lambda^-(start_tail + E_1 + ... + E_k) for iid unit exponentials.
// start_tail = Lambda(a) conditions all jumps below a.
RankedJumps sample_ranked_jumps(const LevyDensity& lv, double start_tail,
                                const TruncationRule& stop, RngStream& rng);

// Density/cdf of the total mass of the scale-invariant process with rate c
// on (0,1] (generalized Dickman). Solved stepwise from the integral
// equation t g(t) = c (G(t) - G(t-1)).
double dickman_pdf(double c, double t);
double dickman_cdf(double c, double t);

}  // namespace jot

#endif
