#pragma once
#include "magbm/dos.hpp"
#include "magbm/test_function.hpp"

#include <string>
#include <vector>

namespace magbm {

struct ThermoParams {
  double beta = 1.0;
  double mu = 0.0;
  double B = 30.0;
  int N = 5;
};

enum class CutoffKind { one_sided, symmetric };

// eta_N: 1 on [0, sqrt(2BN)] (one_sided) or [-sqrt(2BN), sqrt(2BN)] (symmetric).
// Edges sit in the spectral gaps next to the outermost retained levels; `shoulder` is the
// fraction of the free gap [lambda_j + v, lambda_{j+1} - v] used by each transition.
struct Cutoff {
  CutoffKind kind = CutoffKind::one_sided;
  int N = 5;
  double shoulder = 0.5;
};

struct CutoffFunction {
  TestFunction eta;
  TestFunction deta_dB;  // edges move with B
  BandRange bands;
};

CutoffFunction make_cutoff(const Cutoff& c, double B, double sup_norm);

struct ResponseOptions {
  CutoffKind thermo_cutoff = CutoffKind::one_sided;  // Omega, M, chi, rho
  double shoulder = 0.5;
  double chi_step = 1e-3;  // relative step of the central difference for chi
};

double sigma_xx(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o = {});
double grand_potential(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o = {});
double magnetization(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o = {});
double susceptibility(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o = {});
double charge_density(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o = {});
double chemical_potential(double rho_target, double B, double beta, int N, const DosModel& m,
                          const ResponseOptions& o = {});
double canonical_magnetization(double rho_target, double B, double beta, int N, const DosModel& m,
                               const ResponseOptions& o = {});

// Smoothed density rho(f_mu) for a normalized Gaussian f_mu of width sigma, bands [-N, N].
double smoothed_dos(const ThermoParams& tp, double sigma, const DosModel& m);

// sum over n in [-N, N] of d/dB rho(eta^sym n_beta(. - mu))
double hall_streda(const ThermoParams& tp, const DosModel& m, const ResponseOptions& o = {});
// The two-sum Gibbs-factor display for the chiral model, o(1) dropped.
double hall_chiral_explicit(const ThermoParams& tp, const DosModel& m);

struct HallValue {
  double raw;        // as displayed
  double neutral;    // raw minus its value at mu = 0
};
// sum_{n=-N}^{N} n_beta(lambda_{n,B} - mu) / pi
HallValue hall_staircase(const ThermoParams& tp);
// sum_{n=-N}^{N} t_{n,0}(n_beta(. - mu)) - t_{n,1}(n_beta(. - mu)) / (2 sqrt B)
HallValue hall_antichiral(const ThermoParams& tp, const DosModel& m);

struct ResponseCurve {
  std::string sweep_name;            // mu | B | invB
  std::vector<double> points;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  // values[column][point]
  std::string model;
  ThermoParams tp;

  void validate() const;
};

// Evenly spaced points, strictly monotone.
std::vector<double> linspace(double a, double b, int n);

} // namespace magbm
