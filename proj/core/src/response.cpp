#include "magbm/response.hpp"
#include "magbm/errors.hpp"
#include "magbm/landau.hpp"
#include "magbm/thermo.hpp"

#include <cmath>
#include <string>

namespace magbm {

namespace {

struct Edge {
  TestFunction step, dstep;
};

// Transition S((x - a)/(b - a)) whose endpoints move with B at rates da, db.
Edge moving_edge(double a, double b, double da, double db) {
  const double w = b - a, dw = db - da;
  const double P = -da / w + a * dw / (w * w), Q = -dw / (w * w);
  return {TestFunction::smoothstep(a, b), TestFunction::smoothstep(a, b, 1) * TestFunction::polynomial({P, Q})};
}

// Endpoints of the transition inside the gap (j, j+1), with their B-derivatives.
struct GapSlot {
  double lo, hi, dlo, dhi;
};

GapSlot gap_slot(int j, double B, double v, double shoulder) {
  const double l0 = landau_level(j, B), l1 = landau_level(j + 1, B);
  const double d0 = landau_level_dB(j, B), d1 = landau_level_dB(j + 1, B);
  const double mid = 0.5 * (l0 + l1), half = 0.5 * (l1 - l0) - v;
  if (!(half > 0.0)) throw NumericError("gap closed between levels " + std::to_string(j) + " and " + std::to_string(j + 1));
  const double dmid = 0.5 * (d0 + d1), dhalf = 0.5 * (d1 - d0);
  return {mid - shoulder * half, mid + shoulder * half, dmid - shoulder * dhalf, dmid + shoulder * dhalf};
}

void check(const ThermoParams& tp) {
  if (!(tp.beta > 0.0)) throw DomainError("beta must be positive");
  if (!(tp.B > 0.0)) throw DomainError("B must be positive");
  if (tp.N < 1) throw DomainError("N must be at least 1");
  if (!std::isfinite(tp.mu)) throw DomainError("mu must be finite");
}

CutoffFunction thermo_cutoff(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o) {
  return make_cutoff({o.thermo_cutoff, tp.N, o.shoulder}, tp.B, m.sup_norm);
}

// beta-scaled logistic derivative: -n_beta'(x) = beta n (1 - n)
TestFunction fermi_slope(double beta, double mu) {
  return (TestFunction::fermi(beta, mu) - TestFunction::fermi(beta, mu) * TestFunction::fermi(beta, mu)) * beta;
}

} // namespace

CutoffFunction make_cutoff(const Cutoff& c, double B, double v) {
  if (c.N < 1) throw DomainError("cutoff N must be at least 1");
  if (!(c.shoulder > 0.0 && c.shoulder <= 1.0)) throw DomainError("cutoff shoulder must lie in (0, 1]");
  const int lo_gap = c.kind == CutoffKind::one_sided ? -1 : -c.N - 1;
  const GapSlot r = gap_slot(lo_gap, B, v, c.shoulder);
  const GapSlot f = gap_slot(c.N, B, v, c.shoulder);
  const Edge rise = moving_edge(r.lo, r.hi, r.dlo, r.dhi);
  const Edge fall = moving_edge(f.hi, f.lo, f.dhi, f.dlo);
  CutoffFunction out;
  out.eta = rise.step * fall.step;
  out.deta_dB = rise.dstep * fall.step + rise.step * fall.dstep;
  out.bands = {lo_gap + 1, c.N};
  return out;
}

double sigma_xx(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o) {
  check(tp);
  // integral over [0, inf): the symmetric cutoff restricted to bands n >= 0
  const CutoffFunction c = make_cutoff({CutoffKind::one_sided, tp.N, o.shoulder}, tp.B, m.sup_norm);
  const TestFunction g = fermi_slope(tp.beta, tp.mu) * TestFunction::polynomial({0.0, 1.0}) * c.eta;
  return trace(g, c.bands, tp.B, m).total();
}

double grand_potential(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o) {
  check(tp);
  const CutoffFunction c = thermo_cutoff(tp, m, o);
  return trace(TestFunction::grand_kernel(tp.beta, tp.mu) * c.eta, c.bands, tp.B, m).total();
}

double magnetization(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o) {
  check(tp);
  const CutoffFunction c = thermo_cutoff(tp, m, o);
  const TestFunction K = TestFunction::grand_kernel(tp.beta, tp.mu);
  const TestFunction dK = K * c.deta_dB;
  return -dtrace_dB(K * c.eta, c.bands, tp.B, m, &dK).total();
}

double susceptibility(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o) {
  check(tp);
  const double h = o.chi_step * tp.B;
  ThermoParams p = tp, q = tp;
  p.B += h;
  q.B -= h;
  return (magnetization(p, m, o) - magnetization(q, m, o)) / (2.0 * h);
}

double charge_density(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o) {
  check(tp);
  const CutoffFunction c = thermo_cutoff(tp, m, o);
  return trace(TestFunction::fermi(tp.beta, tp.mu) * c.eta, c.bands, tp.B, m).total();
}

double chemical_potential(double rho, double B, double beta, int N, const DosModel& m, const ResponseOptions& o) {
  if (!std::isfinite(rho)) throw DomainError("target density must be finite");
  const CutoffFunction c = make_cutoff({o.thermo_cutoff, N, o.shoulder}, B, m.sup_norm);
  ThermoParams tp{beta, 0.0, B, N};
  auto rho_at = [&](double mu) {
    tp.mu = mu;
    return charge_density(tp, m, o);
  };
  const double v = m.sup_norm;
  double lo = landau_level(c.bands.lo - 1, B) + v, hi = landau_level(c.bands.hi + 1, B) - v;
  const double width = hi - lo;
  for (int widen = 0; widen < 8 && (rho_at(lo) > rho || rho_at(hi) < rho); ++widen) {
    lo -= width;
    hi += width;
  }
  const double rlo = rho_at(lo), rhi = rho_at(hi);
  if (rho < rlo || rho > rhi)
    throw NumericError("target density " + std::to_string(rho) + " outside attainable range [" + std::to_string(rlo) +
                       ", " + std::to_string(rhi) + "]");
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (rho_at(mid) < rho ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double canonical_magnetization(double rho, double B, double beta, int N, const DosModel& m, const ResponseOptions& o) {
  const double mu = chemical_potential(rho, B, beta, N, m, o);
  return magnetization({beta, mu, B, N}, m, o);
}

double smoothed_dos(const ThermoParams& tp, double sigma, const DosModel& m) {
  check(tp);
  if (!(sigma > 0.0)) throw DomainError("smoothing width must be positive");
  const CutoffFunction c = make_cutoff({CutoffKind::symmetric, tp.N, 0.5}, tp.B, m.sup_norm);
  return trace(TestFunction::gaussian(tp.mu, sigma) * c.eta, c.bands, tp.B, m).total();
}

double hall_streda(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o) {
  check(tp);
  const CutoffFunction c = make_cutoff({CutoffKind::symmetric, tp.N, o.shoulder}, tp.B, m.sup_norm);
  const TestFunction n = TestFunction::fermi(tp.beta, tp.mu);
  const TestFunction dn = c.deta_dB * n;
  return dtrace_dB(c.eta * n, c.bands, tp.B, m, &dn).total();
}

double hall_chiral_explicit(const ThermoParams& tp, const DosModel& m) {
  check(tp);
  const double U = m.kind == ModelKind::chiral ? m.ave_U : 0.0;
  const double sB = std::sqrt(tp.B), b = tp.beta;
  double first = 0.0, second = 0.0;
  for (int n = -tp.N; n <= tp.N; ++n) {
    const double ln = (n > 0 ? 1.0 : n < 0 ? -1.0 : 0.0) * std::sqrt(2.0 * std::abs(n));
    const double occ = fermi(b, ln * sB - tp.mu), emp = 1.0 - occ;
    // 8 pi: d/dB of the Streda density; the usual display carries 4 pi
    // gamma n^2 = n (1 - n); n^4 (gamma - 4 gamma^2 + gamma^3) = n (1 - n) (n^2 - 4 n (1 - n) + (1 - n)^2)
    const double p = occ * emp;
    first += occ / kPi - b * ln * sB / (2.0 * kPi) * p;
    second -= ln * std::abs(ln) * std::abs(ln) * b * b * b * U / (8.0 * kPi * sB) * p * (occ * occ - 4.0 * p + emp * emp);
  }
  return first + second;
}

HallValue hall_staircase(const ThermoParams& tp) {
  check(tp);
  auto raw = [&](double mu) {
    double s = 0.0;
    for (int n = -tp.N; n <= tp.N; ++n) s += fermi(tp.beta, landau_level(n, tp.B) - mu);
    return s / kPi;
  };
  const double r = raw(tp.mu);
  return {r, r - raw(0.0)};
}

HallValue hall_antichiral(const ThermoParams& tp, const DosModel& m) {
  check(tp);
  if (m.kind != ModelKind::antichiral || m.absV.empty()) throw DomainError("hall_antichiral needs an anti-chiral model");
  auto raw = [&](double mu) {
    const TestFunction f = TestFunction::fermi(tp.beta, mu);
    double s = 0.0;
    for (int n = -tp.N; n <= tp.N; ++n)
      s += t_moment0(f, n, tp.B, m) - m.antichiral_sign * t_moment1(f, n, tp.B, m) / (2.0 * std::sqrt(tp.B));
    return s;
  };
  const double r = raw(tp.mu);
  return {r, r - raw(0.0)};
}

void ResponseCurve::validate() const {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i] > points[i - 1])) throw DomainError("sweep points must be strictly increasing");
  if (values.size() != columns.size()) throw DomainError("column count mismatch");
  for (const auto& col : values) {
    if (col.size() != points.size()) throw DomainError("column length mismatch");
    for (double x : col)
      if (!std::isfinite(x)) throw NumericError("non-finite value in response curve");
  }
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2 || !(b > a)) throw DomainError("linspace needs n >= 2 and b > a");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[std::size_t(i)] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
  return v;
}

} // namespace magbm
