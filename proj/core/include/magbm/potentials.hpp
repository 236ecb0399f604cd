#pragma once
#include "magbm/lattice.hpp"

#include <Eigen/Core>
#include <functional>
#include <map>

namespace magbm {

struct TunnelingModel {
  std::map<int, cplx> beta{{1, 1.0}};
  std::map<int, cplx> gamma{{1, 1.0}};
  double alpha0 = 0.0;
  double alpha1 = 1.0;

  static TunnelingModel chiral(double alpha1);
  static TunnelingModel antichiral(double alpha0);
  void validate() const;

  // Raw potentials (no alpha factors) as Fourier series on Gamma*.
  FourierSeries U() const;
  FourierSeries Uminus() const;
  FourierSeries V() const;
};

struct FieldSample {
  cplx value;
  cplx dz;
  cplx dzbar;
};

FieldSample eval_V(const TunnelingModel& model, cplx z);
FieldSample eval_U(const TunnelingModel& model, cplx z);
FieldSample eval_Uminus(const TunnelingModel& model, cplx z);

Eigen::Matrix2cd eval_T(const TunnelingModel& model, cplx z);
// [[0, T], [T^*, 0]]
Eigen::Matrix4cd eval_script_V(const TunnelingModel& model, cplx z);

double sup_norm_V(const TunnelingModel& model, int grid_m = 64);

// Periodic trapezoid average over the m x m cell grid (compensated summation).
double cell_average(const std::function<double(cplx)>& field, int grid_m = 64);

double frak_U(const TunnelingModel& model, cplx eta);
double ave_frak_U(const TunnelingModel& model, int grid_m = 64);

struct SqueezingValue {
  cplx value;
  bool branch_ambiguous;  // |W| < 1e-14, conj(W)^{1/2} has no usable branch
};

// 8i|W|B - 8i Im(dW/dz * conj(W)^{1/2}), W = (alpha1 U)(alpha1 U_-), principal branch.
SqueezingValue squeezing_condition(const TunnelingModel& model,
                                   const std::function<double(cplx)>& magnetic_B, cplx z);

} // namespace magbm
