#pragma once
#include "magbm/lattice.hpp"

#include <functional>
#include <map>
#include <vector>

namespace magbm {

// Parallelogram cell z = s1 g1 + s2 g2, s in [0,1)^2, with dual h_k: Re(g_j conj h_k) = 2 pi delta_jk.
struct TorusCell {
  cplx g1, g2;

  cplx point(double s1, double s2) const { return s1 * g1 + s2 * g2; }
  cplx h1() const;
  cplx h2() const;
  cplx momentum(int n1, int n2) const { return double(n1) * h1() + double(n2) * h2(); }
  double area() const { return std::abs(std::imag(std::conj(g1) * g2)); }

  static TorusCell moire();
  // z = lambda (omega x1 + omega^2 x2)
  static TorusCell hexagonal(double lambda);
};

enum class ZeroModeVariant {
  dzbar,  // (-2i d_zbar + A) psi = 0
  dz,     // (-2i d_z + A) psi = 0
};

// psi(z) = exp(-phi(z)), phi = sum_n A_n/p_n e^{2 pi i n.x} (dzbar) or A_n/conj(p_n) (dz).
struct PeriodicZeroMode {
  TorusCell cell;
  ZeroModeVariant variant;
  std::map<Mode, cplx> phi;

  cplx phi_at(cplx z) const;
  cplx operator()(cplx z) const { return std::exp(-phi_at(z)); }
};

PeriodicZeroMode periodic_zero_mode(const std::map<Mode, cplx>& A_fourier, const TorusCell& cell,
                                    ZeroModeVariant variant = ZeroModeVariant::dz);

// Row-major n x n matrix of first order scalar operators c_dz d_z + c_dzbar d_zbar + mult(z).
struct FieldOp {
  struct Entry {
    cplx c_dz = 0.0;
    cplx c_dzbar = 0.0;
    std::function<cplx(cplx)> mult;
  };
  int n = 1;
  std::vector<Entry> entries;

  static FieldOp scalar(Entry e) { return {1, {std::move(e)}}; }
};

using Field = std::function<cplx(cplx)>;

// Relative L2 residual |op f| / |f| on an m x m grid of the cell; derivatives by FFT.
// f must be periodic on the cell.
double verify_zero_mode(const TorusCell& cell, int m, const std::vector<Field>& f, const FieldOp& op);

// Same residual for non-periodic (magnetic) f, sampled at the given points with 8th order
// central differences of step h.
double fd_residual(const std::vector<cplx>& points, const std::vector<Field>& f, const FieldOp& op,
                   double h = 1e-2);
// op applied to f at each point, per output component.
std::vector<std::vector<cplx>> fd_apply(const std::vector<cplx>& points, const std::vector<Field>& f, const FieldOp& op,
                                        double h = 1e-2);

} // namespace magbm
