#include "magbm/lattice.hpp"
#include "magbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iterator>

namespace magbm {

MoireLattice MoireLattice::standard(double l0) {
  MoireLattice L{};
  const cplx I(0.0, 1.0);
  L.omega = std::polar(1.0, 2.0 * kPi / 3.0);
  const cplx w2 = L.omega * L.omega;
  L.zeta1 = 4.0 * kPi * I * L.omega;
  L.zeta2 = 4.0 * kPi * I * w2;
  L.eta1 = w2 / std::sqrt(3.0);
  L.eta2 = -L.omega / std::sqrt(3.0);
  cplx wj = 1.0;
  for (int j = 0; j < 3; ++j) {
    L.a[j] = (4.0 / 3.0) * kPi * I * wj;
    wj *= L.omega;
  }
  L.cell_area = std::abs(std::imag(std::conj(L.zeta1) * L.zeta2));
  L.l0 = l0;
  return L;
}

const MoireLattice& lattice() {
  static const MoireLattice L = MoireLattice::standard();
  return L;
}

std::pair<double, double> MoireLattice::fractional(cplx z) const {
  return {std::real(z * std::conj(eta1)) / (2 * kPi), std::real(z * std::conj(eta2)) / (2 * kPi)};
}

std::pair<double, double> MoireLattice::dual_coords(cplx k) const {
  return {std::real(k * std::conj(zeta1)) / (2 * kPi), std::real(k * std::conj(zeta2)) / (2 * kPi)};
}

double MoireLattice::distance_to_dual(cplx k) const {
  auto [c1, c2] = dual_coords(k);
  double best = std::abs(k);
  const double f1 = std::floor(c1), f2 = std::floor(c2);
  for (int d1 = -1; d1 <= 2; ++d1)
    for (int d2 = -1; d2 <= 2; ++d2)
      best = std::min(best, std::abs(k - dual(f1 + d1, f2 + d2)));
  return best;
}

double moire_scale(double theta, double l0) {
  const double t = std::abs(theta);
  if (!(t > 0.0) || t >= kPi / 6.0) throw DomainError("moire_scale: need 0 < |theta| < pi/6");
  if (!(l0 > 0.0)) throw DomainError("moire_scale: l0 must be positive");
  return std::sqrt(3.0) * l0 / (2.0 * std::sin(t / 2.0));
}

double dual_pairing(const MoireLattice& lat, int j, int k) {
  if (j < 1 || j > 2 || k < 1 || k > 2) throw DomainError("dual_pairing: indices must be 1 or 2");
  const cplx z = j == 1 ? lat.zeta1 : lat.zeta2;
  const cplx e = k == 1 ? lat.eta1 : lat.eta2;
  return std::real(z * std::conj(e));
}

CellGrid cell_grid(const MoireLattice& lat, int m) {
  if (m < 2) throw DomainError("cell_grid: m must be at least 2");
  CellGrid g;
  g.m = m;
  g.weight = lat.cell_area / double(m) / double(m);
  g.points.reserve(std::size_t(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double s1 = double(i) / m, s2 = double(j) / m;
      g.points.push_back({s1, s2, lat.point(s1, s2)});
    }
  return g;
}

// --- FourierSeries

cplx FourierSeries::momentum(const Mode& m) const {
  return lattice().dual(m.m1, m.m2) / double(scale);
}

cplx FourierSeries::operator()(cplx z) const {
  cplx s = 0.0;
  for (const auto& [m, c] : coeff) s += c * plane_wave(momentum(m), z);
  return s;
}

cplx FourierSeries::dz(cplx z) const {
  const cplx I(0.0, 1.0);
  cplx s = 0.0;
  for (const auto& [m, c] : coeff) s += c * (I * std::conj(momentum(m)) / 2.0) * plane_wave(momentum(m), z);
  return s;
}

cplx FourierSeries::dzbar(cplx z) const {
  const cplx I(0.0, 1.0);
  cplx s = 0.0;
  for (const auto& [m, c] : coeff) s += c * (I * momentum(m) / 2.0) * plane_wave(momentum(m), z);
  return s;
}

FourierSeries FourierSeries::conj_field() const {
  FourierSeries r;
  r.scale = scale;
  for (const auto& [m, c] : coeff) r.coeff[-m] += std::conj(c);
  return r;
}

FourierSeries FourierSeries::reflected() const {
  FourierSeries r;
  r.scale = scale;
  for (const auto& [m, c] : coeff) r.coeff[-m] += c;
  return r;
}

FourierSeries FourierSeries::rotation_symmetrized() const {
  // f(conj(w) z) has mode w p; w (m1 eta1 + m2 eta2) = (-m1 - m2) eta1 + m1 eta2
  FourierSeries r;
  r.scale = scale;
  const cplx w = lattice().omega;
  for (const auto& [m, c] : coeff) {
    Mode q = m;
    cplx f = c / 3.0;
    for (int j = 0; j < 3; ++j) {
      r.coeff[q] += f;
      q = {-q.m1 - q.m2, q.m1};
      f *= w;
    }
  }
  for (auto it = r.coeff.begin(); it != r.coeff.end();) it = std::abs(it->second) < 1e-300 ? r.coeff.erase(it) : std::next(it);
  return r;
}

bool FourierSeries::periodic_on(double lambda, double tol) const {
  if (!(lambda > 0.0)) throw DomainError("periodic_on: lambda must be positive");
  for (const auto& [m, c] : coeff)
    for (int mj : {m.m1, m.m2}) {
      const double x = lambda * mj / scale;
      if (std::abs(x - std::round(x)) > tol) return false;
    }
  return true;
}

FourierSeries FourierSeries::operator*(const FourierSeries& o) const {
  if (scale != o.scale) throw DomainError("FourierSeries: mismatched lattice scales");
  FourierSeries r;
  r.scale = scale;
  for (const auto& [m, c] : coeff)
    for (const auto& [n, d] : o.coeff) r.coeff[m + n] += c * d;
  return r;
}

FourierSeries FourierSeries::operator+(const FourierSeries& o) const {
  if (scale != o.scale && !empty() && !o.empty()) throw DomainError("FourierSeries: mismatched lattice scales");
  FourierSeries r = *this;
  if (empty()) r.scale = o.scale;
  for (const auto& [n, d] : o.coeff) r.coeff[n] += d;
  return r;
}

FourierSeries FourierSeries::scaled(cplx c) const {
  FourierSeries r = *this;
  for (auto& [m, v] : r.coeff) v *= c;
  return r;
}

FourierSeries FourierSeries::d_z() const {
  const cplx I(0.0, 1.0);
  FourierSeries r = *this;
  for (auto& [m, v] : r.coeff) v *= I * std::conj(momentum(m)) / 2.0;
  return r;
}

FourierSeries FourierSeries::d_zbar() const {
  const cplx I(0.0, 1.0);
  FourierSeries r = *this;
  for (auto& [m, v] : r.coeff) v *= I * momentum(m) / 2.0;
  return r;
}

double FourierSeries::l2_mean() const {
  double s = 0.0;
  for (const auto& [m, c] : coeff) s += std::norm(c);
  return s;
}

cplx FourierSeries::mean() const {
  auto it = coeff.find(Mode{0, 0});
  return it == coeff.end() ? cplx(0.0) : it->second;
}

int FourierSeries::degree() const {
  int d = 0;
  for (const auto& [m, c] : coeff) d = std::max({d, std::abs(m.m1), std::abs(m.m2)});
  return d;
}

} // namespace magbm
