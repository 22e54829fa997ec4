#ifndef JOT_URNS_HPP
#define JOT_URNS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jot/levy.hpp"
#include "jot/measures.hpp"
#include "jot/rng.hpp"

namespace jot {

// The heavy-tailed urns can ask for more new features than is feasible to
// materialize; callers may censor such runs (the feature count is
// nondecreasing, so a run that overflows a histogram cap stays above it).
struct UrnOverflow : std::runtime_error {
  explicit UrnOverflow(const std::string& what) : std::runtime_error(what) {}
};

// Sequential row-by-row state for the buffet-style urn schemes. Rows are
// emitted as index sets over the columns seen so far (new columns are
// appended); counts track n_k.
struct UrnState {
  enum class Model { ibp, stable_jot, bfry };
  Model model = Model::ibp;
  long n = 0;
  std::vector<long> counts;
  long k_n() const { return static_cast<long>(counts.size()); }

  // ibp(c, theta)
  double c = 0.0, theta = 0.0;
  // stable_jot(alpha, pstar): the restricted case c = alpha
  double alpha = 0.0;
  ScalingLaw pstar;
  // bfry(sigma, lv)
  double sigma = 0.0;
  std::optional<LevyDensity> lv;
  bool sb_fast = false;  // stable-beta inclusion shortcut available
  double sb_alpha = 0.0, sb_theta = 0.0;
  std::vector<double> psi;  // psi_1.. cache
  double tau = 0.0;         // sum psi_1..psi_n
  long feature_cap = 1'000'000;  // throw UrnOverflow beyond this

  static UrnState ibp_urn(double c, double theta);
  static UrnState stable_jot_urn(double alpha, ScalingLaw pstar);
  static UrnState bfry_urn(double sigma, LevyDensity lv);
};

// Each returns the index set of columns possessed by the new row and
// updates the state in place.
std::vector<long> ibp_next_row(UrnState& state, RngStream& rng);
std::vector<long> stable_jot_next_row(UrnState& state, RngStream& rng);
std::vector<long> bfry_next_row(UrnState& state, RngStream& rng);
std::vector<long> urn_next_row(UrnState& state, RngStream& rng);

// psi_k = int_0^1 s (1-s)^(k-1) lambda(s) ds for k = 1..n.
std::vector<double> psi_increments(const LevyDensity& lv, long n);

// f(x, a, b) = (x a^b + (1-x)(1+a)^b)^(1/b).
double bfry_f(double x, double a, double b);

// Marginal law of K_n in the bfry model: Poisson mixed over a
// BFRY(sigma)-distributed rate multiplier with cumulative intensity tau.
double poisson_bfry_pmf(double sigma, double tau, long j);

// Conditional law of the new-feature count given K_n = k when the
// cumulative intensity moves from tau_prev to tau_next.
double bfry_increment_pmf(double sigma, double tau_next, double tau_prev,
                          long j, long k);

}  // namespace jot

#endif
