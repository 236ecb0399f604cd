#pragma once
#include "magbm/lattice.hpp"

#include <vector>

namespace magbm {

struct ThetaParams {
  double a = 0.5;
  double b = 0.5;
  cplx tau = lattice().omega;
};

// sum_n exp(pi i (n+a)^2 tau + 2 pi i (n+a)(z+b))
cplx theta_ab(const ThetaParams& p, cplx z);

// d^r/dz^r theta for r = 0..order.
std::vector<cplx> theta_ab_derivs(const ThetaParams& p, cplx z, int order);

// Truncation radius: terms with |n| beyond it are below 1e-18 of the peak term.
int theta_truncation(const ThetaParams& p, cplx z, double rel = 1e-18);

} // namespace magbm
