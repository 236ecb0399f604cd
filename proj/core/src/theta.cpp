#include "magbm/theta.hpp"
#include "magbm/errors.hpp"

#include <cmath>

namespace magbm {

namespace {

void check(const ThetaParams& p) {
  if (!(std::imag(p.tau) > 0.0)) throw DomainError("theta: Im(tau) must be positive");
}

} // namespace

// |term_n| = peak * exp(-pi Im(tau) (n + a - c)^2) with c = -Im(z)/Im(tau); the margin
// covers the polynomial growth of derivative terms.
int theta_truncation(const ThetaParams& p, cplx, double rel) {
  check(p);
  const double width = std::sqrt((-std::log(rel) + 40.0) / (kPi * std::imag(p.tau)));
  return int(std::ceil(width)) + 2;
}

std::vector<cplx> theta_ab_derivs(const ThetaParams& p, cplx z, int order) {
  check(p);
  const cplx I(0.0, 1.0);
  const int R = theta_truncation(p, z);
  const double t = std::imag(p.tau);
  const long center = std::lround(-std::imag(z) / t - p.a);
  std::vector<cplx> out(order + 1, 0.0);
  // Sum outward from the dominant term so small terms are added last.
  for (int step = 0; step <= 2 * R; ++step) {
    const long n = center + (step % 2 == 0 ? step / 2 : -(step + 1) / 2);
    const double x = double(n) + p.a;
    const cplx e = std::exp(kPi * I * x * x * p.tau + 2.0 * kPi * I * x * (z + p.b));
    cplx f = 1.0;
    for (int r = 0; r <= order; ++r) {
      out[r] += f * e;
      f *= 2.0 * kPi * I * x;
    }
  }
  return out;
}

cplx theta_ab(const ThetaParams& p, cplx z) { return theta_ab_derivs(p, z, 0)[0]; }

} // namespace magbm
