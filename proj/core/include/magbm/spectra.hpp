#pragma once
#include "magbm/plane_wave.hpp"
#include "magbm/potentials.hpp"

#include <Eigen/SparseCore>
#include <functional>
#include <vector>

namespace magbm {

struct SpectralResult {
  std::vector<cplx> eigenvalues;  // BS: |.| descending; bands: ascending real parts
  int truncation_N = 0;
  double convergence_gap = 0.0;   // max change of the reported eigenvalues from N-4 to N
  std::vector<double> gaps;       // per reported eigenvalue, empty when not computed
  double solver_residual = 0.0;
};

struct BSOptions {
  int sector = -1;          // -1: union of the three sectors
  bool compute_gap = true;
  int gap_count = 12;       // leading eigenvalues whose N-4 change is measured
};

// Eigenvalues of T_k = (2D_zbar - A + k)^{-1} [[0, U], [U_-, 0]]; magic alpha = 1/eigenvalue.
// A is the complex combination A1 + i A2.
SpectralResult birman_schwinger_spectrum(const TunnelingModel& model, cplx k, const FourierSeries& A, int N,
                                         const BSOptions& opt = {});

struct MagicAlphas {
  std::vector<double> real;
  std::vector<cplx> complex;
};
// Real magic values: |Im lambda| < 1e-8 and 0 < 1/lambda <= R. Sorted ascending.
MagicAlphas magic_alphas(const SpectralResult& r, double R);

enum class Variant { chiral, antichiral, semiclassical };

struct FloquetProblem {
  TunnelingModel model;
  Variant variant = Variant::chiral;
  double theta = 0.0;
  FourierSeries A;      // A1 + i A2, Gamma-periodic
  cplx k = 0.0;
  int N = 12;
  int sector = -1;
};

// D with H = [[0, D^*], [D, 0]]:
//  chiral:        [[p+k - A, a1 U], [a1 U_-, p+k - A]]
//  antichiral:    [[a0 V, e^{i theta/2}(p+k - A)], [e^{i theta/2}(conj(p+k) - conj A), a0 conj V]]
//  semiclassical: [[e^{i theta/2}(theta(p+k) - A), a1 U], [a1 U_-, same]]
Eigen::SparseMatrix<cplx> assemble_D(const FloquetProblem& pr, const PlaneWaveBasis& basis);
Eigen::SparseMatrix<cplx> assemble_H(const FloquetProblem& pr, const PlaneWaveBasis& basis);

struct BandOptions {
  bool compute_gap = false;
  int dense_limit = 1200;  // dim(D) at or below which a dense SVD is used
};

// The `count` eigenvalues of smallest modulus of H, ascending. They are +-sigma for the
// smallest singular values sigma of D, so the result is symmetric by construction.
SpectralResult floquet_bands(const FloquetProblem& pr, int count, const BandOptions& opt = {});

// Smallest singular value of D together with its right singular vector, as component fields.
struct ChiralZeroMode {
  double sigma;
  FourierSeries u1, u2;
};
ChiralZeroMode chiral_zero_mode(const FloquetProblem& pr);

struct SqueezeOptions {
  int N = 0;                     // fixed cutoff; 0 selects ceil(modes_per_inverse_theta / theta)
  double modes_per_inverse_theta = 6.0;
  int sector = 0;
  int condition_grid = 32;
  double condition_tol = 1e-10;
};

struct SqueezeReport {
  std::vector<double> thetas;
  std::vector<double> E0;
  std::vector<int> N;
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  double condition_max = 0.0;
  bool condition_ok = false;
};

// Magnetic field of the potential: B = d1 A2 - d2 A1 = 2 Im(d_z A).
std::function<double(cplx)> magnetic_field_of(const FourierSeries& A);

SqueezeReport squeezing_study(const TunnelingModel& model, const FourierSeries& A,
                              const std::vector<double>& thetas, cplx k, const SqueezeOptions& opt = {});

} // namespace magbm
