#ifndef JOT_POSTERIOR_HPP
#define JOT_POSTERIOR_HPP

#include <functional>
#include <string>
#include <vector>

#include "jot/levy.hpp"
#include "jot/measures.hpp"
#include "jot/rng.hpp"

namespace jot {

struct ObservationSummary {
  long n = 0;
  std::vector<long> counts;  // n_k >= 1 for each observed atom
  long k_n() const { return static_cast<long>(counts.size()); }
};

// c_a(n, nk) = int s^nk (1-s)^(n-nk) lambda_a(s) ds with the conditional
// density lambda_a(s) = a lambda(a s) on (0, min(1, hi/a)]. The
// display_form variant integrates s^nk (1-s)^(n-nk) lambda(a s) over
// (0, a] instead; it is kept so the two can be compared numerically.
enum class CaVariant { conditional, display_form };
double c_a(const LevyDensity& lv, double a, long n, long nk,
           CaVariant v = CaVariant::conditional);

// psi_n(a) = a int_0^1 (1 - (1-s)^n) lambda(a s) ds.
double psi_n(const LevyDensity& lv, double a, long n);

// Levy density of the unseen weights given n rows:
// s -> a (1-s)^n lambda(a s).
LevyDensity posterior_levy(const LevyDensity& lv, double a, long n);

// Same law obtained by thinning conditional_levy(lv, a) with (1-s)^n.
RankedJumps posterior_levy_thinned(const LevyDensity& lv, double a, long n,
                                   const TruncationRule& trunc, RngStream& rng);

// Draw from density proportional to s^nk (1-s)^(n-nk) lambda_a(s), nk >= 1.
double sample_observed_jump(const LevyDensity& lv, double a, long n, long nk,
                            RngStream& rng);

// Normalized distribution on a log-spaced grid; piecewise-constant cells.
class GridDistribution {
 public:
  GridDistribution(std::vector<double> points, std::vector<double> weights);
  double sample(RngStream& rng) const;
  double mean() const;
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& masses() const { return masses_; }
  std::string to_json() const;

 private:
  std::vector<double> points_, masses_, cdf_, edges_;
};

// Posterior of the scaling jump: density proportional to
// pstar_density(a) exp(-psi_n(a)) prod_k c_a(n, n_k), on an adaptive
// log-spaced grid trimmed to the region carrying mass.
GridDistribution delta_posterior(const LevyDensity& lv,
                                 const std::function<double(double)>& pstar_density,
                                 const ObservationSummary& obs,
                                 double grid_lo = 1e-6, double grid_hi = 1e6,
                                 int n_points = 400);

struct PredictiveRow {
  std::vector<int> include;  // 0/1 per observed atom
  long new_count = 0;
  double a = 0.0;  // scaling value used
};

// Observed atom k kept with probability c_a(n+1, n_k+1)/c_a(n, n_k);
// new-feature count Poisson(q_n) with q_n = int s (1-s)^n lambda_a(s) ds.
PredictiveRow predictive_row(const LevyDensity& lv,
                             const std::function<double(RngStream&)>& a_sampler,
                             const ObservationSummary& obs, RngStream& rng);

// Density of a ScalingLaw for use as a delta_posterior prior.
std::function<double(double)> scaling_law_density(const ScalingLaw& pstar,
                                                  const LevyDensity& lv);

}  // namespace jot

#endif
