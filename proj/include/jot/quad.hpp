#ifndef JOT_QUAD_HPP
#define JOT_QUAD_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace jot {

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Integrates f over (lo, hi) to absolute-or-relative tolerance tol.
// Endpoint power singularities s^{-p} and (1-s)^{-p}, p < 1, are
// supported; hi may be +infinity. Throws QuadratureError carrying the
// last residual estimate on non-convergence.
double quad(const std::function<double(double)>& f, double lo, double hi,
            double tol = 1e-10);

}  // namespace jot

#endif
