#ifndef JOT_DIAGNOSTICS_HPP
#define JOT_DIAGNOSTICS_HPP

#include <functional>
#include <utility>
#include <vector>

#include "jot/levy.hpp"
#include "jot/rng.hpp"

namespace jot {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample chi-square with automatic merging so every expected count
// is >= 5; p from the chi-square survival function.
TestResult chi_square_two_sample(const std::vector<long>& hist_a,
                                 const std::vector<long>& hist_b);

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);
TestResult ks_one_sample(std::vector<double> a,
                         const std::function<double(double)>& cdf);

// Half L1 distance of the two empirical histograms over shared
// equal-width bins.
double tv_histogram(const std::vector<double>& a, const std::vector<double>& b,
                    int bins);

struct LeCamResult {
  double tv = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool exact = true;
  double mc_stderr = 0.0;  // only when exact is false
};

// TV(PoissonBinomial(weights), Poisson(sum weights)) against the bound
// sum w^2. Exact convolution up to 30 weights; Monte Carlo beyond
// (requires rng).
LeCamResult lecam_check(const std::vector<double>& weights,
                        RngStream* rng = nullptr, long mc_reps = 200000);

struct TailIndexResult {
  double estimate = 0.0;
  double stderr_boot = 0.0;
  long k_used = 0;
};

// Hill estimator over the top k_frac fraction, bootstrap standard error.
TailIndexResult tail_index(const std::vector<double>& samples, double k_frac,
                           RngStream& rng, int bootstrap = 100);

struct PowerLawFlag {
  bool is_power_law = false;
  std::vector<double> estimates;  // across the k_frac ladder
  double drift_ratio = 0.0;
};

// Hill-plot plateau check across k_frac in {0.02, 0.05, 0.1, 0.2}.
PowerLawFlag power_law_flag(const std::vector<double>& samples, RngStream& rng,
                            double max_drift = 1.5);

struct TvEstimate {
  double tv = 0.0;
  double stderr_jack = 0.0;
  long conditioned = 0;
};

// TV between the small-jump mass tau_beta = sum of jumps <= beta
// conditioned on total mass in t_window and unconditioned.
TvEstimate tau_beta_compare(const LevyDensity& lv, double beta,
                            std::pair<double, double> t_window, long replicates,
                            RngStream& rng);

}  // namespace jot

#endif
