#include "magbm/zero_mode.hpp"
#include "magbm/errors.hpp"

#include <fftw3.h>
#include <cmath>
#include <mutex>

namespace magbm {

namespace {

const cplx I(0.0, 1.0);

// FFTW planning is not thread safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// Dual vector h with Re(ga conj h) = 2pi*ea, Re(gb conj h) = 2pi*eb.
cplx dual_of(cplx ga, cplx gb, double ea, double eb) {
  const double a = ga.real(), b = ga.imag(), c = gb.real(), d = gb.imag();
  const double det = a * d - b * c;
  const double x = 2 * kPi * (d * ea - b * eb) / det;
  const double y = 2 * kPi * (-c * ea + a * eb) / det;
  return {x, y};
}

// Spectral d_z and d_zbar of periodic grid data (row-major, index i*m + j for (s1, s2) = (i, j)/m).
void spectral_derivs(const TorusCell& cell, int m, const std::vector<cplx>& f, std::vector<cplx>& dz,
                     std::vector<cplx>& dzbar) {
  const std::size_t n = std::size_t(m) * m;
  std::vector<cplx> hat(n), tmp(n);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fwd = fftw_plan_dft_2d(m, m, reinterpret_cast<fftw_complex*>(tmp.data()),
                           reinterpret_cast<fftw_complex*>(hat.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(m, m, reinterpret_cast<fftw_complex*>(hat.data()),
                           reinterpret_cast<fftw_complex*>(tmp.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  tmp = f;
  fftw_execute(fwd);
  const std::vector<cplx> base = hat;
  auto freq = [m](int i) { return i <= m / 2 ? i : i - m; };
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const int n1 = freq(i), n2 = freq(j);
        const bool nyq = (m % 2 == 0) && (i == m / 2 || j == m / 2);
        const cplx p = cell.momentum(n1, n2);
        const cplx sym = pass == 0 ? I * std::conj(p) / 2.0 : I * p / 2.0;
        hat[std::size_t(i) * m + j] = nyq ? cplx(0.0) : base[std::size_t(i) * m + j] * sym / double(n);
      }
    fftw_execute(bwd);
    (pass == 0 ? dz : dzbar) = tmp;
  }
  std::lock_guard<std::mutex> lock(fftw_mutex());
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
}

} // namespace

cplx TorusCell::h1() const { return dual_of(g1, g2, 1.0, 0.0); }
cplx TorusCell::h2() const { return dual_of(g1, g2, 0.0, 1.0); }

TorusCell TorusCell::moire() { return {lattice().zeta1, lattice().zeta2}; }

TorusCell TorusCell::hexagonal(double lambda) {
  const cplx w = lattice().omega;
  return {lambda * w, lambda * w * w};
}

cplx PeriodicZeroMode::phi_at(cplx z) const {
  const double s1 = std::real(z * std::conj(cell.h1())) / (2 * kPi);
  const double s2 = std::real(z * std::conj(cell.h2())) / (2 * kPi);
  cplx s = 0.0;
  for (const auto& [n, c] : phi) s += c * std::polar(1.0, 2 * kPi * (n.m1 * s1 + n.m2 * s2));
  return s;
}

PeriodicZeroMode periodic_zero_mode(const std::map<Mode, cplx>& A_fourier, const TorusCell& cell,
                                    ZeroModeVariant variant) {
  PeriodicZeroMode z{cell, variant, {}};
  for (const auto& [n, a] : A_fourier) {
    if (n.m1 == 0 && n.m2 == 0) throw DomainError("periodic_zero_mode: A must have zero mean");
    const cplx p = cell.momentum(n.m1, n.m2);
    if (std::abs(p) < 1e-300) throw NumericError("periodic_zero_mode: vanishing Fourier symbol");
    // -2i d_zbar e_p = p e_p and -2i d_z e_p = conj(p) e_p
    z.phi[n] += variant == ZeroModeVariant::dzbar ? a / p : a / std::conj(p);
  }
  return z;
}

double verify_zero_mode(const TorusCell& cell, int m, const std::vector<Field>& f, const FieldOp& op) {
  if (int(f.size()) != op.n || int(op.entries.size()) != op.n * op.n)
    throw DomainError("verify_zero_mode: operator and field sizes differ");
  const std::size_t npts = std::size_t(m) * m;
  std::vector<cplx> pts(npts);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) pts[std::size_t(i) * m + j] = cell.point(double(i) / m, double(j) / m);

  std::vector<std::vector<cplx>> val(op.n), dz(op.n), dzb(op.n);
  for (int c = 0; c < op.n; ++c) {
    val[c].resize(npts);
    for (std::size_t q = 0; q < npts; ++q) val[c][q] = f[c](pts[q]);
    spectral_derivs(cell, m, val[c], dz[c], dzb[c]);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t q = 0; q < npts; ++q) {
    for (int r = 0; r < op.n; ++r) {
      cplx s = 0.0;
      for (int c = 0; c < op.n; ++c) {
        const auto& e = op.entries[std::size_t(r) * op.n + c];
        s += e.c_dz * dz[c][q] + e.c_dzbar * dzb[c][q];
        if (e.mult) s += e.mult(pts[q]) * val[c][q];
      }
      num += std::norm(s);
      den += std::norm(val[r][q]);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::vector<std::vector<cplx>> fd_apply(const std::vector<cplx>& points, const std::vector<Field>& f, const FieldOp& op,
                                        double h) {
  if (int(f.size()) != op.n || int(op.entries.size()) != op.n * op.n)
    throw DomainError("fd_apply: operator and field sizes differ");
  static const double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  auto diff = [&](const Field& g, cplx z, cplx dir) {
    cplx s = 0.0;
    for (int k = 1; k <= 4; ++k) s += w[k - 1] * (g(z + double(k) * h * dir) - g(z - double(k) * h * dir));
    return s / h;
  };
  std::vector<std::vector<cplx>> out(std::size_t(op.n), std::vector<cplx>(points.size()));
  for (std::size_t q = 0; q < points.size(); ++q) {
    const cplx z = points[q];
    for (int r = 0; r < op.n; ++r) {
      cplx s = 0.0;
      for (int c = 0; c < op.n; ++c) {
        const auto& e = op.entries[std::size_t(r) * op.n + c];
        if (e.c_dz != 0.0 || e.c_dzbar != 0.0) {
          const cplx dx = diff(f[c], z, 1.0), dy = diff(f[c], z, I);
          s += e.c_dz * (dx - I * dy) / 2.0 + e.c_dzbar * (dx + I * dy) / 2.0;
        }
        if (e.mult) s += e.mult(z) * f[c](z);
      }
      out[std::size_t(r)][q] = s;
    }
  }
  return out;
}

double fd_residual(const std::vector<cplx>& points, const std::vector<Field>& f, const FieldOp& op, double h) {
  const auto applied = fd_apply(points, f, op, h);
  double num = 0.0, den = 0.0;
  for (int r = 0; r < op.n; ++r)
    for (std::size_t q = 0; q < points.size(); ++q) {
      num += std::norm(applied[std::size_t(r)][q]);
      den += std::norm(f[std::size_t(r)](points[q]));
    }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace magbm
