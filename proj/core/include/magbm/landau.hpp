#pragma once
#include "magbm/lattice.hpp"
#include "magbm/theta.hpp"

#include <vector>

namespace magbm {

// sgn(n) sqrt(2|n|B)
double landau_level(int n, double B);
// d/dB of landau_level
double landau_level_dB(int n, double B);

// Torus of the enlarged lattice Gamma_lambda = gamma1 Z + gamma2 Z,
// gamma1 = 4 pi i lambda omega, gamma2 = 4 pi i lambda omega^2, with B = flux / (8 pi lambda^2 Im omega).
struct MagneticTorus {
  double B;
  double lambda_scale;
  int flux;
  cplx bloch_k;

  cplx gamma1() const;
  cplx gamma2() const;
  double cell_area() const;
};

MagneticTorus make_magnetic_torus(double lambda_scale, int flux, cplx bloch_k);

// T_gamma u(z) = exp(i B/2 Im(conj(gamma) z)) u(z + gamma), with the sign e^{i m n flux pi}
// for gamma = m gamma1 + n gamma2.
template <class F>
cplx magnetic_translate(const MagneticTorus& t, const F& u, int m, int n, cplx z) {
  const cplx g = double(m) * t.gamma1() + double(n) * t.gamma2();
  const double sign = ((m * n * t.flux) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::polar(1.0, t.B / 2.0 * std::imag(std::conj(g) * z)) * u(z + g);
}

// Landau states psi_{n,k}, n = 0..nmax, on a flux-one magnetic torus.
// Fiber operators: a_k = a + conj(k), a_k^* = a^* + k with a = 2D_z - conj(A), A = -iBz/2;
// a_k psi_{n} = sqrt(2Bn) psi_{n-1}, a_k^* psi_{n} = sqrt(2B(n+1)) psi_{n+1}.
class LandauStates {
 public:
  static constexpr int kMaxLevel = 8;

  LandauStates(const MagneticTorus& t, int nmax = 0);

  cplx operator()(int n, cplx z) const;
  const MagneticTorus& torus() const { return t_; }
  int nmax() const { return nmax_; }

  // psi_0 = C0 e^{-B|z|^2/4} h(conj z) e^{-i Re(z conj k)}, h(w) = e^{cw - Bw^2/4} theta(w/(-4 pi lambda i) - z_k)
  cplx shift_c() const { return c_; }
  cplx shift_zk() const { return zk_; }

 private:
  std::vector<cplx> h_derivs(cplx w, int order) const;

  MagneticTorus t_;
  int nmax_;
  double C0_ = 1.0;
  cplx c_, zk_;
  std::vector<std::vector<cplx>> coeff_;  // coeff_[n][j] multiplies z^j h^{(n-j)}(conj z)
};

cplx psi0_bloch(const MagneticTorus& t, cplx z);

} // namespace magbm
