#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "jot/levy.hpp"

namespace jot {

namespace {

// Density of the total mass of the rate-c scale-invariant process on
// (0,1]. On (0,1] the delay equation t g(t) = c (G(t) - G(t-1)) gives
// g(t) = K t^{c-1}; beyond 1 it is stepped with an implicit trapezoid
// rule on a grid with h dividing 1, then everything is normalized.
struct DickmanTable {
  double c = 1.0;
  double k = 1.0;  // normalized coefficient on (0,1]
  double h = 1.0 / 4096;
  double t_max = 0.0;
  std::vector<double> g, big_g;  // on grid t_i = i h

  explicit DickmanTable(double c_in) : c(c_in) {
    const int per_unit = 4096;
    h = 1.0 / per_unit;
    const int units = static_cast<int>(32 + 8 * c);
    const int n = units * per_unit;
    t_max = n * h;
    g.assign(n + 1, 0.0);
    big_g.assign(n + 1, 0.0);
    for (int i = 1; i <= per_unit; ++i) {
      const double t = i * h;
      g[i] = std::pow(t, c - 1.0);
      big_g[i] = std::pow(t, c) / c;
    }
    for (int i = per_unit + 1; i <= n; ++i) {
      const double t = i * h;
      const double rhs = big_g[i - 1] + 0.5 * h * g[i - 1] - big_g[i - per_unit];
      g[i] = c * rhs / (t - 0.5 * c * h);
      big_g[i] = big_g[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
    }
    const double total = big_g[n];
    if (!(total > 0) || !std::isfinite(total))
      throw std::runtime_error("dickman: normalization failed");
    for (int i = 0; i <= n; ++i) {
      g[i] /= total;
      big_g[i] /= total;
    }
    k = 1.0 / total;
  }

  double pdf(double t) const {
    if (t <= 0.0 || t >= t_max) return 0.0;
    if (t <= 1.0) return k * std::pow(t, c - 1.0);
    const double x = t / h;
    const std::size_t i = static_cast<std::size_t>(x);
    const double f = x - i;
    return (1.0 - f) * g[i] + f * g[i + 1];
  }

  double cdf(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= t_max) return 1.0;
    if (t <= 1.0) return k * std::pow(t, c) / c;
    const double x = t / h;
    const std::size_t i = static_cast<std::size_t>(x);
    const double f = x - i;
    return (1.0 - f) * big_g[i] + f * big_g[i + 1];
  }
};

const DickmanTable& dickman_table(double c) {
  if (!(c > 0)) throw std::invalid_argument("dickman: rate must be > 0");
  static std::mutex mu;
  static std::map<double, std::shared_ptr<DickmanTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(c);
  if (it == cache.end())
    it = cache.emplace(c, std::make_shared<DickmanTable>(c)).first;
  return *it->second;
}

}  // namespace

double dickman_pdf(double c, double t) { return dickman_table(c).pdf(t); }
double dickman_cdf(double c, double t) { return dickman_table(c).cdf(t); }

}  // namespace jot
