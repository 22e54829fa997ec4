#ifndef JOT_PKBRIDGE_HPP
#define JOT_PKBRIDGE_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jot/featmat.hpp"
#include "jot/levy.hpp"
#include "jot/measures.hpp"
#include "jot/rng.hpp"

namespace jot {

struct Partition {
  long n = 0;
  std::vector<std::vector<long>> blocks;  // disjoint, cover 0..n-1, non-empty
  long block_count() const { return static_cast<long>(blocks.size()); }
  std::string to_json() const;
};

class BridgeError : public std::runtime_error {
 public:
  BridgeError(const std::string& what, double acceptance_rate)
      : std::runtime_error(what), rate_(acceptance_rate) {}
  double acceptance_rate() const { return rate_; }

 private:
  double rate_;
};

struct ConditionResult {
  UnitaryMeasure measure;
  double mass = 0.0;
  long tries = 0;
  double acceptance_rate = 0.0;
};

// Rejection-samples JOT(lv, pstar) until total mass <= threshold.
// Restricted to families whose normalized law is constant in the
// conditioned mass (gamma, scale_invariant, stable).
ConditionResult condition_mass(const LevyDensity& lv, const ScalingLaw& pstar,
                               double threshold, long max_tries, RngStream& rng);

// i.i.d. categorical draws; residual mass (1 - sum weights) produces
// singleton blocks.
Partition paintbox(const std::vector<double>& weights, long n, RngStream& rng);

Partition crp_sample(double theta, long n, RngStream& rng);
Partition py_sample(double alpha, double theta, long n, RngStream& rng);

// condition_mass -> normalize by accepted mass -> paintbox.
Partition bridge_partition(const LevyDensity& lv, const ScalingLaw& pstar, long n,
                           double threshold, RngStream& rng);

struct SampleRecord {
  double a = 0.0;  // realized scaling jump
  double t = 0.0;  // accepted total mass
  double statistic = 0.0;
};

struct WeightedEstimate {
  double estimate = 0.0;
  double ess = 0.0;
  bool low_ess = false;
  std::vector<double> weights;  // normalized importance weights
};

// Self-normalized importance weights omega(a, t) = h(a t) / (a lambda(a)).
WeightedEstimate surrogate_reweight(const LevyDensity& lv,
                                    const std::function<double(double)>& h,
                                    const std::vector<SampleRecord>& samples);

struct CoupledDraw {
  Partition partition;
  FeatureMatrix matrix;
  double mass = 0.0;
};

// One accepted scale-invariant measure drives both the paintbox partition
// of its normalization and the Bernoulli-process matrix of the raw weights.
CoupledDraw coupled_crp_ibp(double theta, long n, RngStream& rng);

}  // namespace jot

#endif
