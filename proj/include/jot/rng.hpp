#ifndef JOT_RNG_HPP
#define JOT_RNG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace jot {

// Deterministic counter-free generator (xoshiro256**). Identical
// (seed, stream_id) pairs replay identical variate sequences; child
// streams are derived via splitmix64 mixing of seed and a
// golden-ratio-scrambled stream id, so replicate-parallel runs stay
// reproducible.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Independent child stream; calling twice with the same id gives the
  // same stream regardless of this stream's consumption state.
  RngStream derive(std::uint64_t child_id) const;

  std::uint64_t next_u64();

  // Uniform on (0,1) (never returns 0 or 1).
  double uniform();
  double uniform(double lo, double hi);
  double exponential(double rate = 1.0);
  double gamma(double shape, double rate = 1.0);
  double beta(double a, double b);
  long poisson(double rate);
  // Exact Binomial(n, p) via beta-splitting; O(log n) for large n.
  long binomial(long n, double p);
  // Positive alpha-stable with Laplace transform exp(-t^alpha)
  // (Kanter's transformation; no density evaluation involved).
  double positive_stable(double alpha);
  // BFRY(sigma): Gamma(1-sigma,1) / Beta(sigma,1).
  double bfry(double sigma);

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

// Dispatch used by the CLI and generic harnesses.
enum class Dist { uniform, exponential, gamma, beta, poisson, positive_stable, bfry };
Dist dist_from_name(const std::string& name);
double sample_variate(Dist dist, const std::vector<double>& params, RngStream& rng);
// Density of a continuous Dist at x (poisson and positive_stable rejected).
double variate_pdf(Dist dist, const std::vector<double>& params, double x);

}  // namespace jot

#endif
