#include "magbm/krylov.hpp"
#include "magbm/errors.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace magbm {

namespace {

Eigen::MatrixXcd random_block(int n, int b, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd X(n, b);
  for (int j = 0; j < b; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = {g(rng), g(rng)};
  return X;
}

// Orthogonalize W against V[:, 0:m] (twice) and orthonormalize its columns.
// Columns that collapse are replaced by fresh random directions.
void orthonormalize(const Eigen::MatrixXcd& V, int m, Eigen::MatrixXcd& W, std::mt19937_64& rng) {
  for (int j = 0; j < W.cols(); ++j) {
    const double n0 = W.col(j).norm();
    for (int attempt = 0; attempt < 3; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        if (m > 0) W.col(j) -= V.leftCols(m) * (V.leftCols(m).adjoint() * W.col(j));
        for (int i = 0; i < j; ++i) W.col(j) -= W.col(i) * W.col(i).dot(W.col(j));
      }
      const double nn = W.col(j).norm();
      if (nn > 1e-10 * std::max(n0, 1e-300)) {
        W.col(j) /= nn;
        break;
      }
      W.col(j) = random_block(int(W.rows()), 1, rng);
    }
  }
}

} // namespace

KrylovResult hermitian_extreme_eigs(const BlockOp& op, int n, int count, const KrylovOptions& opt) {
  if (count < 1 || count > n) throw DomainError("hermitian_extreme_eigs: bad eigenvalue count");
  const int b = std::min(opt.block, n);
  const int maxm = std::min(n, std::max(opt.max_basis, 2 * count + 2 * b));
  std::mt19937_64 rng(opt.seed);

  Eigen::MatrixXcd V(n, maxm), AV(n, maxm);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(maxm, maxm);
  Eigen::MatrixXcd W = random_block(n, b, rng);
  orthonormalize(V, 0, W, rng);

  KrylovResult res;
  int m = 0;
  int next_check = std::max(2 * count + b, 4 * b);
  while (true) {
    const int add = std::min<int>(int(W.cols()), maxm - m);
    V.middleCols(m, add) = W.leftCols(add);
    Eigen::MatrixXcd out(n, add);
    op(V.middleCols(m, add), out);
    AV.middleCols(m, add) = out;
    const Eigen::MatrixXcd Gcol = V.leftCols(m + add).adjoint() * out;
    G.block(0, m, m + add, add) = Gcol;
    G.block(m, 0, add, m) = Gcol.topRows(m).adjoint();
    m += add;

    const bool full = m >= maxm;
    if (m >= next_check || full) {
      next_check = m + std::max(2 * b, m / 4);
      Eigen::MatrixXcd Gm = G.topLeftCorner(m, m);
      Gm = (Gm + Gm.adjoint()).eval() / 2.0;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gm);
      std::vector<int> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return std::abs(es.eigenvalues()[x]) > std::abs(es.eigenvalues()[y]);
      });
      double worst = 0.0;
      res.values.assign(count, 0.0);
      res.vectors.resize(n, count);
      for (int c = 0; c < count; ++c) {
        const int idx = order[c];
        const double t = es.eigenvalues()[idx];
        const Eigen::VectorXcd y = es.eigenvectors().col(idx);
        const Eigen::VectorXcd x = V.leftCols(m) * y;
        const double r = (AV.leftCols(m) * y - t * x).norm();
        worst = std::max(worst, r / std::max(std::abs(t), 1e-300));
        res.values[c] = t;
        res.vectors.col(c) = x;
      }
      res.max_residual = worst;
      res.basis_size = m;
      if (worst <= opt.tol || full || m >= n) {
        res.converged = worst <= opt.tol || m >= n;
        return res;
      }
    }
    W = AV.middleCols(m - add, add);
    orthonormalize(V, m, W, rng);
  }
}

} // namespace magbm
