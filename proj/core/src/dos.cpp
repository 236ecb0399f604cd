#include "magbm/dos.hpp"
#include "magbm/errors.hpp"
#include "magbm/landau.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magbm {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

int effective_K(const TestFunction& f) { return std::min(f.smoothness() - 1, 64); }

double error_scale(ModelKind kind, double B, double delta, int K) {
  const double first = kind == ModelKind::antichiral ? std::pow(B, 3.0 * delta) : std::pow(B, 4.0 * delta - 0.5);
  return first + std::pow(B, 1.0 - (K - 1) * delta);
}

void check_support(const TestFunction& f, BandRange r, double B, double v) {
  if (r.lo > r.hi) throw DomainError("band range is empty");
  if (!(B > 0.0)) throw DomainError("trace: B must be positive");
  // only the window must be non-empty here; band_window itself also demands separated neighbours
  for (int n = r.lo; n <= r.hi; ++n)
    if (landau_level(n - 1, B) + v >= landau_level(n + 1, B) - v)
      throw NumericError("gap closed: the window around level " + std::to_string(n) + " is empty");
  if (f.compact()) {
    const double lo = landau_level(r.lo - 1, B) + v, hi = landau_level(r.hi + 1, B) - v;
    if (f.support_lo() < lo || f.support_hi() > hi)
      throw NumericError("support of f leaks outside the valid band windows");
  }
}

DOSExpansion make(ModelKind kind, double B, const DosModel& m, const TestFunction& f) {
  DOSExpansion e;
  e.kind = kind;
  e.B = B;
  e.theta = m.theta;
  e.alpha0 = kind == ModelKind::antichiral ? m.tunneling.alpha0 : 0.0;
  e.alpha1 = kind == ModelKind::chiral ? m.tunneling.alpha1 : 0.0;
  e.delta = m.delta;
  e.K = effective_K(f);
  return e;
}

// Ave(w(c, s) * (f^{(d)}(lam + c) + f^{(d)}(lam - c))) with power p of s as weight.
double split_moment(const TestFunction& f, int deriv, int n, double lam, const DosModel& m, int power) {
  const double a0 = m.tunneling.alpha0;
  const double cs = n == 0 ? 1.0 : std::cos(m.theta / 2.0);
  const double sn = n == 0 ? 1.0 : std::sin(m.theta / 2.0);
  Neumaier acc;
  for (double v : m.absV) {
    const double c = a0 * cs * v;
    const double s = a0 * sn * v;
    const double w = power == 0 ? 1.0 : s * s;
    acc.add(w * (f.d(lam + c, deriv) + f.d(lam - c, deriv)));
  }
  return acc.value() / double(m.absV.size());
}

} // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::free: return "free";
    case ModelKind::chiral: return "chiral";
    case ModelKind::antichiral: return "antichiral";
  }
  return "unknown";
}

DosModel DosModel::free_model() {
  DosModel m;
  m.kind = ModelKind::free;
  m.tunneling.alpha0 = 0.0;
  m.tunneling.alpha1 = 0.0;
  return m;
}

DosModel DosModel::chiral(const TunnelingModel& t, int grid_m) {
  DosModel m;
  m.kind = ModelKind::chiral;
  m.tunneling = t;
  m.tunneling.alpha0 = 0.0;
  m.grid_m = grid_m;
  m.sup_norm = sup_norm_V(m.tunneling, grid_m);
  m.ave_U = ave_frak_U(m.tunneling, grid_m);
  return m;
}

DosModel DosModel::antichiral(const TunnelingModel& t, double theta, int grid_m) {
  DosModel m;
  m.kind = ModelKind::antichiral;
  m.tunneling = t;
  m.tunneling.alpha1 = 0.0;
  m.theta = theta;
  m.grid_m = grid_m;
  m.sup_norm = sup_norm_V(m.tunneling, grid_m);
  const FourierSeries V = m.tunneling.V();
  for (const auto& p : cell_grid(lattice(), grid_m).points) m.absV.push_back(std::abs(V(p.z)));
  return m;
}

DosModel DosModel::antichiral_constant(double alpha0, double theta, double v0) {
  DosModel m;
  m.kind = ModelKind::antichiral;
  m.tunneling.alpha0 = alpha0;
  m.tunneling.alpha1 = 0.0;
  m.theta = theta;
  m.sup_norm = alpha0 * std::abs(v0);
  m.absV = {std::abs(v0)};
  return m;
}

BandWindow band_window(int n, double B, double v) {
  if (!(B > 0.0)) throw DomainError("band_window: B must be positive");
  const double l = landau_level(n, B), lm = landau_level(n - 1, B), lp = landau_level(n + 1, B);
  if (2.0 * v >= l - lm || 2.0 * v >= lp - l)
    throw NumericError("gap closed: ||V||_inf reaches half the Landau gap around level " + std::to_string(n));
  return {n, lm + v, lp - v};
}

BandWindow band_window(int n, double B, const DosModel& model) { return band_window(n, B, model.sup_norm); }

double DOSExpansion::total() const { return leading_total() + correction_total(); }

double DOSExpansion::leading_total() const {
  double s = 0.0;
  for (const auto& b : bands) s += b.leading;
  return s;
}

double DOSExpansion::correction_total() const {
  double s = 0.0;
  for (const auto& b : bands) s += b.correction;
  return s;
}

DOSExpansion trace_free(const TestFunction& f, BandRange r, double B) {
  check_support(f, r, B, 0.0);
  const DosModel m = DosModel::free_model();
  DOSExpansion e = make(ModelKind::free, B, m, f);
  const double es = error_scale(ModelKind::free, B, m.delta, e.K);
  for (int n = r.lo; n <= r.hi; ++n) e.bands.push_back({n, B / kPi * f(landau_level(n, B)), 0.0, es});
  return e;
}

DOSExpansion trace_chiral(const TestFunction& f, BandRange r, double B, const DosModel& m) {
  check_support(f, r, B, m.sup_norm);
  DOSExpansion e = make(ModelKind::chiral, B, m, f);
  const double es = error_scale(ModelKind::chiral, B, m.delta, e.K);
  for (int n = r.lo; n <= r.hi; ++n) {
    const Jet j = f.jet(landau_level(n, B));
    const double corr = n == 0 ? 0.0 : std::abs(n) / kTwoPi * m.ave_U * j[2];
    e.bands.push_back({n, B / kPi * j[0], corr, es});
  }
  return e;
}

double t_moment0(const TestFunction& f, int n, double B, const DosModel& m) {
  return split_moment(f, 0, n, landau_level(n, B), m, 0);
}

double t_moment1(const TestFunction& f, int n, double B, const DosModel& m) {
  return split_moment(f, 1, n, landau_level(n, B), m, 2);
}

DOSExpansion trace_antichiral(const TestFunction& f, BandRange r, double B, const DosModel& m) {
  if (m.absV.empty()) throw DomainError("trace_antichiral: model has no |V| samples");
  check_support(f, r, B, m.sup_norm);
  DOSExpansion e = make(ModelKind::antichiral, B, m, f);
  const double es = error_scale(ModelKind::antichiral, B, m.delta, e.K);
  for (int n = r.lo; n <= r.hi; ++n) {
    const double t0 = t_moment0(f, n, B, m), t1 = t_moment1(f, n, B, m);
    e.bands.push_back({n, B / kTwoPi * t0, m.antichiral_sign * std::sqrt(B) / kTwoPi * t1, es});
  }
  return e;
}

DOSExpansion trace(const TestFunction& f, BandRange r, double B, const DosModel& m) {
  switch (m.kind) {
    case ModelKind::free: return trace_free(f, r, B);
    case ModelKind::chiral: return trace_chiral(f, r, B, m);
    case ModelKind::antichiral: return trace_antichiral(f, r, B, m);
  }
  throw DomainError("trace: unknown model");
}

DOSExpansion dtrace_dB(const TestFunction& f, BandRange r, double B, const DosModel& m, const TestFunction* df_dB) {
  check_support(f, r, B, m.sup_norm);
  DOSExpansion e = make(m.kind, B, m, f);
  e.K = std::min(e.K, 64);
  const double es = error_scale(m.kind, B, m.delta, e.K);
  for (int n = r.lo; n <= r.hi; ++n) {
    const double lam = landau_level(n, B), dl = landau_level_dB(n, B);
    BandRecord rec{n, 0.0, 0.0, es};
    if (m.kind == ModelKind::antichiral) {
      const double t0 = split_moment(f, 0, n, lam, m, 0), t0p = split_moment(f, 1, n, lam, m, 0);
      const double t1 = split_moment(f, 1, n, lam, m, 2), t1p = split_moment(f, 2, n, lam, m, 2);
      rec.leading = t0 / kTwoPi + B / kTwoPi * dl * t0p;
      rec.correction = m.antichiral_sign * (t1 / (2.0 * kTwoPi * std::sqrt(B)) + std::sqrt(B) / kTwoPi * dl * t1p);
    } else {
      const Jet j = f.jet(lam);
      rec.leading = j[0] / kPi + B / kPi * dl * j[1];
      if (m.kind == ModelKind::chiral && n != 0) rec.correction = std::abs(n) / kTwoPi * m.ave_U * j[3] * dl;
    }
    e.bands.push_back(rec);
  }
  if (df_dB) {
    const DOSExpansion extra = trace(*df_dB, r, B, m);
    for (std::size_t i = 0; i < e.bands.size(); ++i) {
      e.bands[i].leading += extra.bands[i].leading;
      e.bands[i].correction += extra.bands[i].correction;
    }
  }
  return e;
}

double integrated_dos_per_band(const DosModel& m, int n, double B) {
  const double v = m.sup_norm;
  const BandWindow w = band_window(n, B, v);
  const double lam = landau_level(n, B);
  const double lo = lam - v, hi = lam + v;
  const TestFunction f = TestFunction::smoothstep(w.lo, lo) * TestFunction::smoothstep(w.hi, hi);
  return trace(f, {n, n}, B, m).total();
}

} // namespace magbm
