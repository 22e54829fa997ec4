#include "jot/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace jot {
namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t mix = seed ^ (stream_id * 0x9e3779b97f4a7c15ULL);
  for (auto& s : s_) s = splitmix64(mix);
  // xoshiro must not start in the all-zero state
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RngStream RngStream::derive(std::uint64_t child_id) const {
  std::uint64_t mix = stream_id_ ^ rotl(child_id + 1, 17);
  std::uint64_t st = mix;
  return RngStream(seed_, splitmix64(st));
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  // 53-bit mantissa, shifted into (0,1)
  double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  return u;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential: rate must be > 0");
  return -std::log(uniform()) / rate;
}

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0) || !(rate > 0))
    throw std::invalid_argument("gamma: shape and rate must be > 0");
  // Marsaglia-Tsang; shape < 1 boosted through U^{1/shape}
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(uniform(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      // normal variate by Marsaglia polar method
      double u1, u2, s;
      do {
        u1 = 2.0 * uniform() - 1.0;
        u2 = 2.0 * uniform() - 1.0;
        s = u1 * u1 + u2 * u2;
      } while (s >= 1.0 || s == 0.0);
      x = u1 * std::sqrt(-2.0 * std::log(s) / s);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return boost * d * v / rate;
  }
}

double RngStream::beta(double a, double b) {
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("beta: both parameters must be > 0");
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

long RngStream::poisson(double rate) {
  if (rate < 0) throw std::invalid_argument("poisson: rate must be >= 0");
  if (rate > 1e9)
    throw std::invalid_argument("poisson: rate > 1e9 exceeds truncation policy");
  if (rate == 0) return 0;
  if (rate < 30.0) {
    // inversion by multiplication of uniforms
    const double limit = std::exp(-rate);
    long k = 0;
    double prod = uniform();
    while (prod > limit) {
      prod *= uniform();
      ++k;
    }
    return k;
  }
  // split recursively: Poisson(a+b) = Poisson(a) + Poisson(b)
  long total = 0;
  double remaining = rate;
  while (remaining >= 30.0) {
    // Gamma race: if Gamma(m,1) <= remaining, at least m arrivals occurred
    const long m = static_cast<long>(std::floor(remaining * 7.0 / 8.0));
    const double g = gamma(static_cast<double>(m), 1.0);
    if (g <= remaining) {
      total += m;
      remaining -= g;
    } else {
      // fewer than m arrivals in [0, remaining]: binomial thinning
      long k = 0;
      const double frac = remaining / g;
      for (long i = 0; i < m - 1; ++i)
        if (uniform() < frac) ++k;
      return total + k;
    }
  }
  return total + poisson(remaining);
}

long RngStream::binomial(long n, double p) {
  if (n < 0 || !(p >= 0.0) || !(p <= 1.0))
    throw std::invalid_argument("binomial: need n >= 0 and p in [0,1]");
  long count = 0;
  // beta-splitting: the a-th order statistic of n uniforms is
  // Beta(a, n+1-a); condition the two halves on its position
  while (n > 64) {
    const long a = n / 2 + 1;
    const double x = beta(static_cast<double>(a), static_cast<double>(n + 1 - a));
    if (p < x) {
      n = a - 1;
      p /= x;
    } else {
      count += a;
      n -= a;
      p = (p - x) / (1.0 - x);
    }
  }
  for (long i = 0; i < n; ++i) count += (uniform() < p);
  return count;
}

double RngStream::positive_stable(double alpha) {
  if (!(alpha > 0) || !(alpha < 1))
    throw std::invalid_argument("positive_stable: index must be in (0,1)");
  // Kanter's method: S = (A(pi*U)/E)^((1-alpha)/alpha)
  const double u = uniform() * M_PI;
  const double e = exponential();
  const double a = std::pow(std::sin(alpha * u), alpha) *
                   std::pow(std::sin((1.0 - alpha) * u), 1.0 - alpha) /
                   std::sin(u);
  // a = [sin(alpha u)^alpha sin((1-alpha)u)^(1-alpha) / sin(u)]^{1/(1-alpha)} rearranged:
  const double kanter = std::pow(a, 1.0 / (1.0 - alpha));
  return std::pow(kanter / e, (1.0 - alpha) / alpha);
}

double RngStream::bfry(double sigma) {
  if (!(sigma > 0) || !(sigma < 1))
    throw std::invalid_argument("bfry: sigma must be in (0,1)");
  const double g = gamma(1.0 - sigma, 1.0);
  const double b = std::pow(uniform(), 1.0 / sigma);  // Beta(sigma,1)
  return g / b;
}

Dist dist_from_name(const std::string& name) {
  if (name == "uniform") return Dist::uniform;
  if (name == "exponential") return Dist::exponential;
  if (name == "gamma") return Dist::gamma;
  if (name == "beta") return Dist::beta;
  if (name == "poisson") return Dist::poisson;
  if (name == "positive_stable") return Dist::positive_stable;
  if (name == "bfry") return Dist::bfry;
  throw std::invalid_argument("unknown distribution: " + name);
}

double sample_variate(Dist dist, const std::vector<double>& params, RngStream& rng) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::invalid_argument("sample_variate: wrong parameter count");
  };
  switch (dist) {
    case Dist::uniform:
      if (params.empty()) return rng.uniform();
      need(2);
      return rng.uniform(params[0], params[1]);
    case Dist::exponential:
      need(1);
      return rng.exponential(params[0]);
    case Dist::gamma:
      need(2);
      return rng.gamma(params[0], params[1]);
    case Dist::beta:
      need(2);
      return rng.beta(params[0], params[1]);
    case Dist::poisson:
      need(1);
      return static_cast<double>(rng.poisson(params[0]));
    case Dist::positive_stable:
      need(1);
      return rng.positive_stable(params[0]);
    case Dist::bfry:
      need(1);
      return rng.bfry(params[0]);
  }
  throw std::logic_error("unreachable");
}

double variate_pdf(Dist dist, const std::vector<double>& params, double x) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::invalid_argument("variate_pdf: wrong parameter count");
  };
  switch (dist) {
    case Dist::uniform: {
      double lo = 0.0, hi = 1.0;
      if (!params.empty()) {
        need(2);
        lo = params[0];
        hi = params[1];
      }
      return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
    }
    case Dist::exponential:
      need(1);
      return x > 0 ? params[0] * std::exp(-params[0] * x) : 0.0;
    case Dist::gamma: {
      need(2);
      if (x <= 0) return 0.0;
      const double k = params[0], r = params[1];
      return std::exp(k * std::log(r) + (k - 1.0) * std::log(x) - r * x -
                      std::lgamma(k));
    }
    case Dist::beta: {
      need(2);
      if (x <= 0 || x >= 1) return 0.0;
      const double a = params[0], b = params[1];
      return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) +
                      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
    }
    case Dist::bfry: {
      need(1);
      if (x <= 0) return 0.0;
      const double s = params[0];
      return s / std::tgamma(1.0 - s) * std::pow(x, -s - 1.0) * (-std::expm1(-x));
    }
    case Dist::poisson:
    case Dist::positive_stable:
      throw std::invalid_argument("variate_pdf: density unavailable for this law");
  }
  throw std::logic_error("unreachable");
}

}  // namespace jot
