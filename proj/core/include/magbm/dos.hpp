#pragma once
#include "magbm/potentials.hpp"
#include "magbm/test_function.hpp"

#include <string>
#include <vector>

namespace magbm {

enum class ModelKind { free, chiral, antichiral };

std::string to_string(ModelKind k);

// Precomputed cell data for the trace expansions.
struct DosModel {
  ModelKind kind = ModelKind::free;
  TunnelingModel tunneling;
  double theta = 0.0;
  double delta = 0.125;          // splitting exponent of the error scale
  double antichiral_sign = 1.0;  // sign of the sqrt(B) term
  int grid_m = 64;

  double sup_norm = 0.0;         // ||V||_inf
  double ave_U = 0.0;            // Ave(frak U), chiral
  std::vector<double> absV;      // |V| on the cell grid, antichiral

  static DosModel free_model();
  static DosModel chiral(const TunnelingModel& t, int grid_m = 64);
  static DosModel antichiral(const TunnelingModel& t, double theta, int grid_m = 64);
  // Anti-chiral model with |V| replaced by a constant v0 (sup norm alpha0 v0).
  static DosModel antichiral_constant(double alpha0, double theta, double v0);
};

struct BandWindow {
  int n;
  double lo, hi;
};

BandWindow band_window(int n, double B, const DosModel& model);
BandWindow band_window(int n, double B, double sup_norm);

struct BandRecord {
  int n;
  double leading;
  double correction;
  double error_scale;
};

struct DOSExpansion {
  ModelKind kind;
  double B, theta, alpha0, alpha1, delta;
  int K;
  std::vector<BandRecord> bands;

  double total() const;
  double leading_total() const;
  double correction_total() const;
};

struct BandRange {
  int lo, hi;  // inclusive
};

DOSExpansion trace_free(const TestFunction& f, BandRange bands, double B);
DOSExpansion trace_chiral(const TestFunction& f, BandRange bands, double B, const DosModel& model);
DOSExpansion trace_antichiral(const TestFunction& f, BandRange bands, double B, const DosModel& model);
// Dispatch on model.kind.
DOSExpansion trace(const TestFunction& f, BandRange bands, double B, const DosModel& model);

// d/dB of the retained expansion by the chain rule through lambda_{n,B}; df_dB adds
// trace(d f/dB) for functions with explicit B dependence.
DOSExpansion dtrace_dB(const TestFunction& f, BandRange bands, double B, const DosModel& model,
                       const TestFunction* df_dB = nullptr);

// Trace of a plateau equal to 1 on the band's spectral support, per unit area.
double integrated_dos_per_band(const DosModel& model, int n, double B);

// Anti-chiral cell moments t_{n,0}(f), t_{n,1}(f).
double t_moment0(const TestFunction& f, int n, double B, const DosModel& model);
double t_moment1(const TestFunction& f, int n, double B, const DosModel& model);

} // namespace magbm
