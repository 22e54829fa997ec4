#ifndef JOT_MEASURES_HPP
#define JOT_MEASURES_HPP

#include <functional>
#include <string>
#include <vector>

#include "jot/levy.hpp"
#include "jot/rng.hpp"

namespace jot {

// Law of the scaling variable Delta-degree: the realized largest jump,
// a fixed value, or an explicit distribution on (0, inf).
struct ScalingLaw {
  enum class Kind { largest_jump, fixed, distribution };
  Kind kind = Kind::largest_jump;
  double value = 0.0;  // fixed(a)
  Dist dist = Dist::gamma;
  std::vector<double> dist_params;
  double power = 1.0;  // a = draw^power (e.g. -1/alpha for a gamma law on zeta)

  static ScalingLaw largest_jump();
  static ScalingLaw fixed(double a);
  static ScalingLaw distribution(Dist d, std::vector<double> params,
                                 double power = 1.0);

  // Draws a; for largest_jump the realized largest jump of lv.
  double sample(const LevyDensity& lv, RngStream& rng) const;
};

// Discrete measure with weights in (0,1], recorded in decreasing order.
struct UnitaryMeasure {
  std::vector<double> weights;
  std::vector<long> atoms;  // opaque labels, 0..K-1 by default
  double delta_ref = 0.0;   // realized scaling jump; 0 when absent
  bool has_zeta = false;
  double zeta = 0.0;
  long truncation_count = 0;
  double tail_mass_bound = 0.0;

  double total_mass() const;
  std::string to_json() const;
};

// Weights J_k = M_k / a for ranked jumps M_k conditioned below a ~ pstar.
UnitaryMeasure sample_jot(const LevyDensity& lv, const ScalingLaw& pstar,
                          const TruncationRule& trunc, RngStream& rng);

// Density s -> a lambda(a s) on (0, min(1, hi/a)].
LevyDensity conditional_levy(const LevyDensity& lv, double a);

// Ranked jumps of the subordinator with density zeta * lambda; lv must be
// supported within (0,1].
UnitaryMeasure sample_scaled_levy(const LevyDensity& lv, double zeta,
                                  const TruncationRule& trunc, RngStream& rng);

// Keeps each weight independently with probability h(weight).
UnitaryMeasure thin(const UnitaryMeasure& m, const std::function<double(double)>& h,
                    RngStream& rng);

// The thinned intensity h * lambda as a density (numeric tail).
LevyDensity thinned_levy(const LevyDensity& lv, std::function<double(double)> h);

// Stable jumps mapped by s -> s/(s+tau), then thinned by (1-s)^theta for
// theta >= 0; for theta in (-alpha, 0) the target density
// alpha tau^{-alpha} s^{-1-alpha} (1-s)^{theta+alpha-1} is sampled directly.
UnitaryMeasure stable_beta_by_scaling(double alpha, double theta, double tau,
                                      const TruncationRule& trunc, RngStream& rng);

}  // namespace jot

#endif
