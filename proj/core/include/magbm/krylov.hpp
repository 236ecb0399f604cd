#pragma once
#include <Eigen/Core>
#include <functional>
#include <vector>

namespace magbm {

struct KrylovOptions {
  int block = 4;
  int max_basis = 480;
  double tol = 1e-9;          // residual |Ay - t y| <= tol |t|
  unsigned long seed = 20240917UL;
};

struct KrylovResult {
  std::vector<double> values;  // largest |t| first
  Eigen::MatrixXcd vectors;
  double max_residual = 0.0;   // relative
  bool converged = false;
  int basis_size = 0;
};

using BlockOp = std::function<void(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out)>;

// Extreme (largest modulus) eigenpairs of a Hermitian operator by block Krylov
// iteration with full reorthogonalization and Rayleigh-Ritz extraction.
KrylovResult hermitian_extreme_eigs(const BlockOp& op, int n, int count, const KrylovOptions& opt = {});

} // namespace magbm
