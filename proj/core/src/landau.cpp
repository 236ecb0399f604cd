#include "magbm/landau.hpp"
#include "magbm/errors.hpp"

#include <cmath>

namespace magbm {

namespace {
const cplx I(0.0, 1.0);
}

double landau_level(int n, double B) {
  if (!(B > 0.0)) throw DomainError("landau_level: B must be positive");
  const double v = std::sqrt(2.0 * std::abs(n) * B);
  return n < 0 ? -v : v;
}

double landau_level_dB(int n, double B) {
  if (!(B > 0.0)) throw DomainError("landau_level_dB: B must be positive");
  if (n == 0) return 0.0;
  const double v = std::sqrt(2.0 * std::abs(n)) / (2.0 * std::sqrt(B));
  return n < 0 ? -v : v;
}

cplx MagneticTorus::gamma1() const { return 4.0 * kPi * I * lambda_scale * lattice().omega; }
cplx MagneticTorus::gamma2() const { return 4.0 * kPi * I * lambda_scale * lattice().omega * lattice().omega; }
double MagneticTorus::cell_area() const { return std::abs(std::imag(std::conj(gamma1()) * gamma2())); }

MagneticTorus make_magnetic_torus(double lambda_scale, int flux, cplx bloch_k) {
  if (!(lambda_scale > 0.0)) throw DomainError("magnetic torus: lambda must be positive");
  if (flux <= 0) throw DomainError("magnetic torus: flux must be a positive integer");
  const double B = flux / (8.0 * kPi * lambda_scale * lambda_scale * std::imag(lattice().omega));
  return {B, lambda_scale, flux, bloch_k};
}

LandauStates::LandauStates(const MagneticTorus& t, int nmax) : t_(t), nmax_(nmax) {
  if (t.flux != 1) throw DomainError("LandauStates: the theta construction needs flux 1");
  if (nmax < 0 || nmax > kMaxLevel) throw DomainError("LandauStates: level out of range (0..8)");
  const double lam = t.lambda_scale;
  const cplx w = lattice().omega, k = t.bloch_k;
  // Solving h(w + conj g)/h(w) = exp(B g w/2 + B|g|^2/4 + i Re(g conj k)) for g = gamma1, gamma2.
  c_ = -std::imag(k);
  zk_ = 0.5 + 2.0 * lam * w * c_ + 2.0 * lam * std::real(I * w * w * std::conj(k));

  coeff_.assign(nmax + 1, {});
  coeff_[0] = {1.0};
  for (int n = 0; n < nmax; ++n) {
    const double norm = std::sqrt(2.0 * t.B * (n + 1));
    coeff_[n + 1].assign(n + 2, 0.0);
    for (int j = 0; j <= n; ++j) {
      coeff_[n + 1][j + 1] += I * t.B * coeff_[n][j] / norm;
      coeff_[n + 1][j] += -2.0 * I * coeff_[n][j] / norm;
    }
  }

  // Normalize psi_0 on the torus cell; |psi_n|^2 is Gamma_lambda-periodic.
  const int m = 64;
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const cplx z = (double(i) / m) * t.gamma1() + (double(j) / m) * t.gamma2();
      s += std::norm((*this)(0, z));
    }
  C0_ = 1.0 / std::sqrt(s * t.cell_area() / (double(m) * m));
}

std::vector<cplx> LandauStates::h_derivs(cplx w, int order) const {
  const double lam = t_.lambda_scale, B = t_.B;
  const cplx scale = 1.0 / (-4.0 * kPi * lam * I);
  ThetaParams p;
  std::vector<cplx> th = theta_ab_derivs(p, w * scale - zk_, order);
  cplx sp = 1.0;
  for (int r = 0; r <= order; ++r) {
    th[r] *= sp;
    sp *= scale;
  }
  // g = exp(c w - B w^2 / 4): g' = q' g with q' = c - B w / 2, q'' = -B/2
  std::vector<cplx> g(order + 1);
  g[0] = std::exp(c_ * w - B * w * w / 4.0);
  const cplx q1 = c_ - B * w / 2.0;
  const double q2 = -B / 2.0;
  for (int r = 0; r < order; ++r) {
    g[r + 1] = q1 * g[r];
    if (r >= 1) g[r + 1] += double(r) * q2 * g[r - 1];
  }
  std::vector<cplx> h(order + 1, 0.0);
  for (int r = 0; r <= order; ++r) {
    double binom = 1.0;
    for (int i = 0; i <= r; ++i) {
      h[r] += binom * g[i] * th[r - i];
      binom = binom * (r - i) / (i + 1);
    }
  }
  return h;
}

cplx LandauStates::operator()(int n, cplx z) const {
  if (n < 0 || n > nmax_) throw DomainError("LandauStates: level out of range");
  const std::vector<cplx> h = h_derivs(std::conj(z), n);
  cplx s = 0.0, zj = 1.0;
  for (int j = 0; j <= n; ++j) {
    s += coeff_[n][j] * zj * h[n - j];
    zj *= z;
  }
  const double S = t_.B * std::norm(z) / 4.0;
  return C0_ * std::exp(-S) * s * std::polar(1.0, -std::real(z * std::conj(t_.bloch_k)));
}

cplx psi0_bloch(const MagneticTorus& t, cplx z) { return LandauStates(t, 0)(0, z); }

} // namespace magbm
