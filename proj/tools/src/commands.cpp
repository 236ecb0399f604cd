#include "magbm_cli/commands.hpp"
#include "magbm/errors.hpp"
#include "magbm/landau.hpp"
#include "magbm/parallel.hpp"
#include "magbm/response.hpp"
#include "magbm/zero_mode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace magbm::cli {

using nlohmann::json;

namespace {

cplx default_k(const RunConfig& c) {
  return c.field.k_set ? c.field.k : (lattice().eta1 + lattice().eta2) / 3.0;
}

Table start(const RunConfig& c, std::string sweep, std::vector<std::string> cols) {
  Table t;
  t.command = c.command;
  t.sweep_name = std::move(sweep);
  t.columns = std::move(cols);
  t.extra = json::object();
  return t;
}

Table finish(Table t, const RunConfig& c) {
  t.config = c.resolved();
  return t;
}

// One row per sweep point, evaluated in parallel into fixed slots.
std::vector<std::vector<double>> sweep_rows(const std::vector<double>& pts, std::size_t ncols,
                                            const std::function<void(double, std::vector<double>&)>& eval) {
  std::vector<std::vector<double>> rows(pts.size(), std::vector<double>(ncols + 1, 0.0));
  parallel_for(int(pts.size()), [&](int i) {
    auto& r = rows[std::size_t(i)];
    r[0] = pts[std::size_t(i)];
    std::vector<double> v(ncols, 0.0);
    eval(pts[std::size_t(i)], v);
    std::copy(v.begin(), v.end(), r.begin() + 1);
  });
  for (const auto& r : rows)
    for (double x : r)
      if (!std::isfinite(x)) throw NumericError("non-finite value in sweep output");
  return rows;
}

// Field strength and chemical potential at a sweep point.
struct Point {
  double B, mu;
};

Point at(const Sweep& s, double x, double B, double mu) {
  if (s.var == "mu") return {B, x};
  if (s.var == "B") return {x, mu};
  return {1.0 / x, mu};
}

std::string sweep_label(const Sweep& s) { return s.var == "invB" ? "inv_B" : s.var; }

Variant variant_of(const std::string& v) {
  if (v == "chiral") return Variant::chiral;
  if (v == "antichiral") return Variant::antichiral;
  if (v == "semiclassical") return Variant::semiclassical;
  throw ConfigError("task.variant must be chiral, antichiral or semiclassical");
}

} // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> n{"magic", "bands", "squeeze", "zeromode", "dos", "sdh", "dhva", "qhe"};
  return n;
}

Table cmd_magic(RunConfig c) {
  check_task_keys(c, {"sector"});
  BSOptions opt;
  opt.sector = task_int(c, "sector", -1);
  opt.gap_count = 1 << 30;
  if (opt.sector < -1 || opt.sector > 2) throw ConfigError("task.sector must be -1, 0, 1 or 2");
  const SpectralResult r = birman_schwinger_spectrum(c.tunneling(), default_k(c), c.field.A, c.numeric.N, opt);

  struct Row {
    cplx l;
    double gap;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    const cplx l = r.eigenvalues[i];
    if (std::abs(l) * c.numeric.R < 1.0) continue;
    rows.push_back({l, i < r.gaps.size() ? r.gaps[i] : r.convergence_gap});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    const double x = std::abs(1.0 / a.l), y = std::abs(1.0 / b.l);
    if (x != y) return x < y;
    if (a.l.real() != b.l.real()) return a.l.real() < b.l.real();
    return a.l.imag() < b.l.imag();
  });

  Table t = start(c, "re_eig", {"im_eig", "alpha", "convergence_gap"});
  for (const Row& row : rows) t.rows.push_back({row.l.real(), row.l.imag(), std::real(1.0 / row.l), row.gap});
  const MagicAlphas m = magic_alphas(r, c.numeric.R);
  t.extra["truncation_N"] = r.truncation_N;
  t.extra["convergence_gap"] = r.convergence_gap;
  if (!m.real.empty()) t.extra["first_real_alpha"] = m.real.front();
  return finish(std::move(t), c);
}

Table cmd_bands(RunConfig c) {
  check_task_keys(c, {"count", "k_grid", "variant", "sector"});
  const int count = task_int(c, "count", 4);
  const int n = task_int(c, "k_grid", 6);
  const Variant var = variant_of(task_string(c, "variant", "chiral"));
  const int sector = task_int(c, "sector", -1);
  if (count < 1 || n < 1) throw ConfigError("task.count and task.k_grid must be positive");
  if (sector < -1 || sector > 2) throw ConfigError("task.sector must be -1, 0, 1 or 2");
  const cplx k0 = c.field.k_set ? c.field.k : lattice().dual(0.5 / n, 0.5 / n);

  std::vector<std::string> cols{"k1", "k2"};
  for (int i = 0; i < count; ++i) cols.push_back("E" + std::to_string(i));
  Table t = start(c, "k_index", cols);
  std::vector<double> idx(std::size_t(n * n));
  for (int i = 0; i < n * n; ++i) idx[std::size_t(i)] = i;
  BandOptions bo;
  bo.dense_limit = c.numeric.dense_limit;
  t.rows = sweep_rows(idx, cols.size(), [&](double x, std::vector<double>& v) {
    const int i = int(x) / n, j = int(x) % n;
    FloquetProblem pr{c.tunneling(), var, c.model.theta, c.field.A, k0 + lattice().dual(double(i) / n, double(j) / n),
                      c.numeric.N, sector};
    const SpectralResult r = floquet_bands(pr, count, bo);
    const auto [k1, k2] = lattice().dual_coords(pr.k);
    v[0] = k1;
    v[1] = k2;
    for (int e = 0; e < count; ++e) v[std::size_t(2 + e)] = e < int(r.eigenvalues.size()) ? r.eigenvalues[std::size_t(e)].real() : 0.0;
  });
  return finish(std::move(t), c);
}

Table cmd_squeeze(RunConfig c) {
  check_task_keys(c, {"thetas", "sector"});
  const std::vector<double> thetas = task_list(c, "thetas", {0.20, 0.18, 0.16, 0.14, 0.12, 0.10, 0.08});
  SqueezeOptions o;
  o.sector = task_int(c, "sector", 0);
  o.modes_per_inverse_theta = c.numeric.modes_per_inverse_theta;
  o.condition_grid = c.numeric.condition_grid;
  const SqueezeReport r = squeezing_study(c.tunneling(), c.field.A, thetas, default_k(c), o);
  Table t = start(c, "theta", {"inv_theta", "N", "E0", "log_E0"});
  for (std::size_t i = 0; i < r.thetas.size(); ++i)
    t.rows.push_back({r.thetas[i], 1.0 / r.thetas[i], double(r.N[i]), r.E0[i], std::log(r.E0[i])});
  t.extra = {{"slope", r.slope}, {"intercept", r.intercept}, {"r2", r.r2}, {"condition_max", r.condition_max},
             {"condition_ok", r.condition_ok}};
  return finish(std::move(t), c);
}

Table cmd_zeromode(RunConfig c) {
  check_task_keys(c, {"kind", "grid", "level", "variant"});
  const std::string kind = task_string(c, "kind", "landau");
  const int m = task_int(c, "grid", 32);
  if (m < 4) throw ConfigError("task.grid must be at least 4");
  Table t = start(c, "index", {"x", "y", "re_psi", "im_psi", "abs_psi"});
  std::vector<cplx> pts;
  std::function<cplx(cplx)> psi;

  if (kind == "landau") {
    const int level = task_int(c, "level", 0);
    const MagneticTorus tor = make_magnetic_torus(c.field.lambda_scale, 1, c.field.k_set ? c.field.k : cplx(0.0));
    if (level < 0 || level > LandauStates::kMaxLevel) throw ConfigError("task.level must lie in [0, 8]");
    auto states = std::make_shared<LandauStates>(tor, level);
    psi = [states, level](cplx z) { return (*states)(level, z); };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) pts.push_back(double(i) / m * tor.gamma1() + double(j) / m * tor.gamma2());
    double trans = 0.0, scale = 0.0;
    for (cplx z : pts) {
      const cplx v = psi(z);
      scale = std::max(scale, std::abs(v));
      trans = std::max({trans, std::abs(magnetic_translate(tor, psi, 1, 0, z) - v), std::abs(magnetic_translate(tor, psi, 0, 1, z) - v)});
    }
    const double B = tor.B;
    const cplx kb = std::conj(tor.bloch_k);
    // a_k psi_n = sqrt(2 B n) psi_{n-1}
    const FieldOp a = FieldOp::scalar({cplx(0, -2), 0.0, [B, kb](cplx z) { return cplx(0, -B / 2) * std::conj(z) + kb; }});
    double ann;
    if (level == 0) {
      ann = fd_residual(pts, {psi}, a);
    } else {
      // compare a_k psi_n against sqrt(2 B n) psi_{n-1}
      const double s = std::sqrt(2.0 * B * level);
      const auto applied = fd_apply(pts, {psi}, a);
      double num = 0.0, den = 0.0;
      for (std::size_t q = 0; q < pts.size(); ++q) {
        const cplx lower = s * (*states)(level - 1, pts[q]);
        num += std::norm(applied[0][q] - lower);
        den += std::norm(lower);
      }
      ann = std::sqrt(num / den);
    }
    t.extra = {{"B", B}, {"translation_residual", trans / scale}, {"annihilation_residual", ann}};
  } else if (kind == "periodic") {
    const std::string vs = task_string(c, "variant", "dz");
    if (vs != "dz" && vs != "dzbar") throw ConfigError("task.variant must be dz or dzbar");
    const ZeroModeVariant var = vs == "dz" ? ZeroModeVariant::dz : ZeroModeVariant::dzbar;
    const TorusCell cell = TorusCell::moire();
    auto zm = std::make_shared<PeriodicZeroMode>(periodic_zero_mode(c.field.A.coeff, cell, var));
    psi = [zm](cplx z) { return (*zm)(z); };
    const FourierSeries A = c.field.A;
    const FieldOp op = FieldOp::scalar({var == ZeroModeVariant::dz ? cplx(0, -2) : 0.0,
                                        var == ZeroModeVariant::dzbar ? cplx(0, -2) : 0.0,
                                        [A](cplx z) { return A(z); }});
    const double res = verify_zero_mode(cell, 128, {psi}, op);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) pts.push_back(cell.point(double(i) / m, double(j) / m));
    t.extra = {{"fft_residual", res}};
  } else {
    throw ConfigError("task.kind must be landau or periodic");
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cplx v = psi(pts[i]);
    t.rows.push_back({double(i), pts[i].real(), pts[i].imag(), v.real(), v.imag(), std::abs(v)});
  }
  return finish(std::move(t), c);
}

Table cmd_dos(RunConfig c) {
  check_task_keys(c, {"f", "sigma", "beta", "n_lo", "n_hi", "sweep"});
  const std::string f = task_string(c, "f", "gaussian");
  if (f != "gaussian" && f != "fermi") throw ConfigError("task.f must be gaussian or fermi");
  const double sigma = task_number(c, "sigma", 1.0), beta = task_number(c, "beta", 2.0);
  const int lo = task_int(c, "n_lo", -c.numeric.cutoff_N), hi = task_int(c, "n_hi", c.numeric.cutoff_N);
  Sweep d;
  d.from = -16.0;
  const Sweep s = task_sweep(c, d);
  if (s.var != "mu") throw ConfigError("dos sweeps the centre of the test function (var mu)");
  const DosModel model = c.dos_model();
  Table t = start(c, "mu", {"leading", "correction", "total", "dtotal_dB", "error_scale"});
  t.rows = sweep_rows(s.values(), 5, [&](double x, std::vector<double>& v) {
    const TestFunction g = f == "gaussian" ? TestFunction::gaussian(x, sigma) : TestFunction::fermi(beta, x);
    const DOSExpansion e = trace(g, {lo, hi}, c.field.B, model);
    v[0] = e.leading_total();
    v[1] = e.correction_total();
    v[2] = e.total();
    v[3] = dtrace_dB(g, {lo, hi}, c.field.B, model).total();
    v[4] = e.bands.empty() ? 0.0 : e.bands.front().error_scale;
  });
  return finish(std::move(t), c);
}

Table cmd_sdh(RunConfig c) {
  check_task_keys(c, {"beta", "mu", "sigma", "sweep"});
  const double beta = task_number(c, "beta", 1.5), mu = task_number(c, "mu", 5.0), sigma = task_number(c, "sigma", 1.0);
  const Sweep s = task_sweep(c, Sweep{});
  const DosModel model = c.dos_model();
  ResponseOptions o;
  o.shoulder = c.numeric.shoulder;
  Table t = start(c, sweep_label(s), {"sigma_xx", "smoothed_dos"});
  t.rows = sweep_rows(s.values(), 2, [&](double x, std::vector<double>& v) {
    const Point p = at(s, x, c.field.B, mu);
    const ThermoParams tp{beta, p.mu, p.B, c.numeric.cutoff_N};
    v[0] = sigma_xx(tp, model, o);
    v[1] = smoothed_dos(tp, sigma, model);
  });
  return finish(std::move(t), c);
}

Table cmd_dhva(RunConfig c) {
  check_task_keys(c, {"beta", "mu", "rho", "sweep"});
  const double beta = task_number(c, "beta", 4.0), mu = task_number(c, "mu", 5.0);
  const bool canonical = c.task.contains("rho");
  const double rho = canonical ? task_number(c, "rho", 0.0) : 0.0;
  Sweep d;
  d.var = "invB";
  d.from = 0.04;
  d.to = 0.44;
  d.points = 401;
  const Sweep s = task_sweep(c, d);
  const DosModel model = c.dos_model();
  ResponseOptions o;
  o.shoulder = c.numeric.shoulder;
  std::vector<std::string> cols{"omega", "magnetization", "susceptibility", "charge_density"};
  if (canonical) {
    cols.push_back("canonical_mu");
    cols.push_back("canonical_magnetization");
  }
  Table t = start(c, sweep_label(s), cols);
  t.rows = sweep_rows(s.values(), cols.size(), [&](double x, std::vector<double>& v) {
    const Point p = at(s, x, c.field.B, mu);
    const ThermoParams tp{beta, p.mu, p.B, c.numeric.cutoff_N};
    v[0] = grand_potential(tp, model, o);
    v[1] = magnetization(tp, model, o);
    v[2] = susceptibility(tp, model, o);
    v[3] = charge_density(tp, model, o);
    if (canonical) {
      v[4] = chemical_potential(rho, p.B, beta, c.numeric.cutoff_N, model, o);
      v[5] = magnetization({beta, v[4], p.B, c.numeric.cutoff_N}, model, o);
    }
  });
  return finish(std::move(t), c);
}

Table cmd_qhe(RunConfig c) {
  check_task_keys(c, {"beta", "mu", "sweep"});
  const double beta = task_number(c, "beta", 2.0), mu = task_number(c, "mu", 5.0);
  Sweep d;
  d.from = -20.0;
  d.to = 20.0;
  d.points = 401;
  const Sweep s = task_sweep(c, d);
  const DosModel model = c.dos_model();
  ResponseOptions o;
  o.shoulder = c.numeric.shoulder;
  std::vector<std::string> cols{"streda", "staircase_raw", "staircase_raw_pi", "staircase_neutral_pi"};
  if (model.kind == ModelKind::chiral) cols.push_back("chiral_explicit");
  if (model.kind == ModelKind::antichiral) {
    cols.push_back("antichiral_raw");
    cols.push_back("antichiral_neutral");
  }
  Table t = start(c, sweep_label(s), cols);
  t.rows = sweep_rows(s.values(), cols.size(), [&](double x, std::vector<double>& v) {
    const Point p = at(s, x, c.field.B, mu);
    const ThermoParams tp{beta, p.mu, p.B, c.numeric.cutoff_N};
    v[0] = hall_streda(tp, model, o);
    const HallValue st = hall_staircase(tp);
    v[1] = st.raw;
    v[2] = st.raw * kPi;
    v[3] = st.neutral * kPi;
    if (model.kind == ModelKind::chiral) v[4] = hall_chiral_explicit(tp, model);
    if (model.kind == ModelKind::antichiral) {
      const HallValue ac = hall_antichiral(tp, model);
      v[4] = ac.raw;
      v[5] = ac.neutral;
    }
  });
  return finish(std::move(t), c);
}

Table run_command(RunConfig c) {
  static const std::map<std::string, Table (*)(RunConfig)> table{
      {"magic", cmd_magic}, {"bands", cmd_bands}, {"squeeze", cmd_squeeze}, {"zeromode", cmd_zeromode},
      {"dos", cmd_dos},     {"sdh", cmd_sdh},     {"dhva", cmd_dhva},       {"qhe", cmd_qhe}};
  const auto it = table.find(c.command);
  if (it == table.end()) throw ConfigError("unknown command " + c.command);
  return it->second(std::move(c));
}

int execute(const std::string& command, const std::string& config_path, const std::string& out_path,
            const std::string& format, int threads, std::string& message) {
  try {
    RunConfig c = load_config(command, config_path);
    if (!format.empty()) {
      if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
      c.output.format = format;
    }
    if (!out_path.empty()) c.output.path = out_path;
    if (c.output.path.empty()) throw ConfigError("no output path: pass --out or set output.path");
    if (threads < 1) throw ConfigError("--threads must be positive");
    set_thread_count(threads);
    const std::string fmt = c.output.format, path = c.output.path;
    Table t;
    try {
      t = run_command(std::move(c));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    write_atomic(path, fmt == "json" ? to_json(t) : to_csv(t));
    return kOk;
  } catch (const ConfigError& e) {
    message = std::string("config error: ") + e.what();
    return kConfig;
  } catch (const IoError& e) {
    message = std::string("i/o error: ") + e.what();
    return kIo;
  } catch (const NumericError& e) {
    message = std::string("numeric error: ") + e.what();
    return kNumeric;
  } catch (const nlohmann::json::exception& e) {
    message = std::string("config error: ") + e.what();
    return kConfig;
  } catch (const std::exception& e) {
    message = std::string("numeric error: ") + e.what();
    return kNumeric;
  }
}

} // namespace magbm::cli
