#include "magbm/plane_wave.hpp"
#include "magbm/errors.hpp"

#include <cstdlib>

namespace magbm {

namespace {
int mod3(int x) { return ((x % 3) + 3) % 3; }
}

PlaneWaveBasis::PlaneWaveBasis(int N, cplx k, int components, int sector)
    : N_(N), k_(k), comps_(components), sector_(sector) {
  if (N < 1) throw DomainError("PlaneWaveBasis: N must be positive");
  if (components < 1) throw DomainError("PlaneWaveBasis: need at least one component");
  if (sector < -1 || sector > 2) throw DomainError("PlaneWaveBasis: sector must be -1, 0, 1 or 2");
  const int side = 2 * N + 1;
  lookup_.assign(std::size_t(side) * side, -1);
  for (int m1 = -N; m1 <= N; ++m1)
    for (int m2 = -N; m2 <= N; ++m2) {
      if (sector >= 0 && mod3(m1 - m2) != sector) continue;
      lookup_[std::size_t(m1 + N) * side + (m2 + N)] = int(modes_.size());
      modes_.push_back({m1, m2});
    }
}

int PlaneWaveBasis::find(const Mode& m) const {
  if (std::abs(m.m1) > N_ || std::abs(m.m2) > N_) return -1;
  return lookup_[std::size_t(m.m1 + N_) * (2 * N_ + 1) + (m.m2 + N_)];
}

Eigen::VectorXcd PlaneWaveBasis::symbol() const {
  Eigen::VectorXcd s(modes());
  for (int i = 0; i < modes(); ++i) s[i] = lattice().dual(modes_[i].m1, modes_[i].m2) + k_;
  return s;
}

bool PlaneWaveBasis::sector_preserving(const FourierSeries& f) {
  if (f.scale != 1) return false;
  for (const auto& [m, c] : f.coeff)
    if (mod3(m.m1 - m.m2) != 0) return false;
  return true;
}

Eigen::MatrixXcd PlaneWaveBasis::convolution(const FourierSeries& f) const {
  if (f.scale != 1) throw DomainError("PlaneWaveBasis: field must be Gamma-periodic");
  if (sector_ >= 0 && !sector_preserving(f)) throw DomainError("PlaneWaveBasis: field mixes sectors");
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(modes(), modes());
  for (int j = 0; j < modes(); ++j)
    for (const auto& [q, c] : f.coeff) {
      const int i = find(modes_[j] + q);
      if (i >= 0) M(i, j) += c;
    }
  return M;
}

std::vector<Eigen::Triplet<cplx>> PlaneWaveBasis::convolution_triplets(const FourierSeries& f, int row_block,
                                                                       int col_block, cplx factor) const {
  if (f.scale != 1) throw DomainError("PlaneWaveBasis: field must be Gamma-periodic");
  if (sector_ >= 0 && !sector_preserving(f)) throw DomainError("PlaneWaveBasis: field mixes sectors");
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(std::size_t(modes()) * f.coeff.size());
  for (int j = 0; j < modes(); ++j)
    for (const auto& [q, c] : f.coeff) {
      const int i = find(modes_[j] + q);
      if (i >= 0) t.emplace_back(row(i, row_block), row(j, col_block), factor * c);
    }
  return t;
}

} // namespace magbm
