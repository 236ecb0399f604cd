#pragma once
#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace magbm {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

struct MoireLattice {
  cplx omega;
  cplx zeta1, zeta2;
  cplx eta1, eta2;
  cplx a[3];
  double cell_area;
  double l0;

  static MoireLattice standard(double l0 = 1.0);

  cplx point(double s1, double s2) const { return s1 * zeta1 + s2 * zeta2; }
  cplx dual(int m1, int m2) const { return double(m1) * eta1 + double(m2) * eta2; }
  cplx dual(double m1, double m2) const { return m1 * eta1 + m2 * eta2; }
  // (s1, s2) with z = s1 zeta1 + s2 zeta2, not reduced.
  std::pair<double, double> fractional(cplx z) const;
  // Dual coordinates of a momentum: k = m1 eta1 + m2 eta2.
  std::pair<double, double> dual_coords(cplx k) const;
  // Distance from k to the nearest point of the dual lattice.
  double distance_to_dual(cplx k) const;
};

const MoireLattice& lattice();

double moire_scale(double theta, double l0 = 1.0);
double dual_pairing(const MoireLattice& lat, int j, int k);

struct CellPoint {
  double s1, s2;
  cplx z;
};

struct CellGrid {
  std::vector<CellPoint> points;
  double weight;  // cell_area / m^2
  int m;
};

CellGrid cell_grid(const MoireLattice& lat, int m);

// Plane wave e_p(z) = exp(i Re(z conj p)); p = m1 eta1 + m2 eta2 in the dual lattice.
// 2 D_zbar e_p = p e_p, 2 D_z e_p = conj(p) e_p, with D = -i d.
inline cplx plane_wave(cplx p, cplx z) {
  double ph = std::real(z * std::conj(p));
  return {std::cos(ph), std::sin(ph)};
}

struct Mode {
  int m1, m2;
  friend bool operator<(const Mode& a, const Mode& b) {
    return a.m1 != b.m1 ? a.m1 < b.m1 : a.m2 < b.m2;
  }
  friend bool operator==(const Mode& a, const Mode& b) { return a.m1 == b.m1 && a.m2 == b.m2; }
  Mode operator-() const { return {-m1, -m2}; }
  Mode operator+(const Mode& o) const { return {m1 + o.m1, m2 + o.m2}; }
};

// Finite trigonometric series sum_m c_m e_{p(m)} with p(m) = (m1 eta1 + m2 eta2) / scale.
// scale > 1 describes fields periodic with respect to a coarser lattice scale*Gamma.
struct FourierSeries {
  std::map<Mode, cplx> coeff;
  int scale = 1;

  cplx momentum(const Mode& m) const;
  cplx operator()(cplx z) const;
  cplx dz(cplx z) const;
  cplx dzbar(cplx z) const;

  FourierSeries conj_field() const;        // conj(f(z))
  FourierSeries reflected() const;         // f(-z)
  FourierSeries operator*(const FourierSeries& o) const;
  FourierSeries operator+(const FourierSeries& o) const;
  FourierSeries scaled(cplx c) const;
  FourierSeries d_z() const;
  FourierSeries d_zbar() const;
  // (1/3) sum_j w^j f(w^-j z); the result satisfies conj(w) g(w z) = g(z)
  FourierSeries rotation_symmetrized() const;
  // every mode is periodic under lambda * Gamma, i.e. lambda m / scale is integral
  bool periodic_on(double lambda, double tol = 1e-9) const;
  double l2_mean() const;  // cell average of |f|^2 by Parseval
  cplx mean() const;
  int degree() const;      // max(|m1|, |m2|) over the support
  bool empty() const { return coeff.empty(); }
};

} // namespace magbm
