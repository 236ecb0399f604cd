#pragma once
#include "magbm/lattice.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

namespace magbm {

// Modes |m1|, |m2| <= N of the dual lattice, optionally restricted to the sector
// (m1 - m2) mod 3 == sector. U, V and the default fields only couple modes within a sector.
class PlaneWaveBasis {
 public:
  PlaneWaveBasis(int N, cplx k, int components, int sector = -1);

  int cutoff() const { return N_; }
  cplx momentum_k() const { return k_; }
  int components() const { return comps_; }
  int sector() const { return sector_; }
  int modes() const { return int(modes_.size()); }
  int dim() const { return modes() * comps_; }

  const Mode& mode(int i) const { return modes_[std::size_t(i)]; }
  // Index of a mode, -1 when outside the truncation or sector.
  int find(const Mode& m) const;
  int row(int mode_index, int component) const { return component * modes() + mode_index; }
  // (mode index, component) of a row
  std::pair<int, int> unrow(int r) const { return {r % modes(), r / modes()}; }

  // p + k for each mode (symbol of 2D_zbar + k).
  Eigen::VectorXcd symbol() const;

  // Convolution (multiplication operator) of f on one component block, dense or sparse.
  Eigen::MatrixXcd convolution(const FourierSeries& f) const;
  std::vector<Eigen::Triplet<cplx>> convolution_triplets(const FourierSeries& f, int row_block,
                                                         int col_block, cplx factor = 1.0) const;

  // True when every mode of f preserves the sector label.
  static bool sector_preserving(const FourierSeries& f);

 private:
  int N_;
  cplx k_;
  int comps_;
  int sector_;
  std::vector<Mode> modes_;
  std::vector<int> lookup_;  // (m1+N)*(2N+1) + (m2+N) -> index or -1
};

} // namespace magbm
