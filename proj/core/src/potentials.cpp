#include "magbm/potentials.hpp"
#include "magbm/errors.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>

namespace magbm {

namespace {

const cplx I(0.0, 1.0);

// i*omega^k in dual coordinates.
constexpr Mode kBase[3] = {{-1, -1}, {2, -1}, {-1, 2}};

bool in_3z_plus_1(int n) { return ((n % 3) + 3) % 3 == 1; }

FieldSample sample(const FourierSeries& f, cplx z) {
  FieldSample s{0.0, 0.0, 0.0};
  for (const auto& [m, c] : f.coeff) {
    const cplx p = f.momentum(m);
    const cplx e = c * plane_wave(p, z);
    s.value += e;
    s.dz += e * (I * std::conj(p) / 2.0);
    s.dzbar += e * (I * p / 2.0);
  }
  return s;
}

// Neumaier summation so that averages of constants come out exact on 2^k grids.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double spectral_norm(const Eigen::Matrix2cd& T) {
  // the closed form loses half the digits when the singular values coincide
  return Eigen::JacobiSVD<Eigen::Matrix2cd>(T).singularValues()(0);
}

} // namespace

TunnelingModel TunnelingModel::chiral(double alpha1) {
  TunnelingModel m;
  m.alpha0 = 0.0;
  m.alpha1 = alpha1;
  return m;
}

TunnelingModel TunnelingModel::antichiral(double alpha0) {
  TunnelingModel m;
  m.alpha0 = alpha0;
  m.alpha1 = 0.0;
  return m;
}

void TunnelingModel::validate() const {
  for (const auto& [n, c] : beta)
    if (!in_3z_plus_1(n)) throw DomainError("beta index " + std::to_string(n) + " not in 3Z+1");
  for (const auto& [n, c] : gamma)
    if (!in_3z_plus_1(n)) throw DomainError("gamma index " + std::to_string(n) + " not in 3Z+1");
  if (!(alpha0 >= 0.0) || !(alpha1 >= 0.0)) throw DomainError("alpha0, alpha1 must be nonnegative");
}

// exp((n/2)(z conj(w)^k - conj(z) w^k)) = e_q(z) with q = i n w^k.
FourierSeries TunnelingModel::U() const {
  validate();
  const cplx w = lattice().omega;
  FourierSeries f;
  for (const auto& [n, b] : beta) {
    cplx wk = 1.0;
    for (int k = 0; k < 3; ++k) {
      f.coeff[Mode{n * kBase[k].m1, n * kBase[k].m2}] += b * wk;
      wk *= w;
    }
  }
  return f;
}

FourierSeries TunnelingModel::Uminus() const { return U().reflected(); }

FourierSeries TunnelingModel::V() const {
  validate();
  FourierSeries f;
  for (const auto& [n, g] : gamma)
    for (int k = 0; k < 3; ++k) f.coeff[Mode{n * kBase[k].m1, n * kBase[k].m2}] += g;
  return f;
}

FieldSample eval_V(const TunnelingModel& model, cplx z) { return sample(model.V(), z); }
FieldSample eval_U(const TunnelingModel& model, cplx z) { return sample(model.U(), z); }
FieldSample eval_Uminus(const TunnelingModel& model, cplx z) { return sample(model.Uminus(), z); }

Eigen::Matrix2cd eval_T(const TunnelingModel& model, cplx z) {
  const cplx v = model.V()(z), u = model.U()(z), um = model.Uminus()(z);
  Eigen::Matrix2cd T;
  T << model.alpha0 * v, model.alpha1 * std::conj(um),
       model.alpha1 * u, model.alpha0 * v;
  return T;
}

Eigen::Matrix4cd eval_script_V(const TunnelingModel& model, cplx z) {
  Eigen::Matrix4cd S = Eigen::Matrix4cd::Zero();
  const Eigen::Matrix2cd T = eval_T(model, z);
  S.block<2, 2>(0, 2) = T;
  S.block<2, 2>(2, 0) = T.adjoint();
  return S;
}

double sup_norm_V(const TunnelingModel& model, int grid_m) {
  if (grid_m < 2) throw DomainError("sup_norm_V: grid too small");
  if (model.alpha0 == 0.0 && model.alpha1 == 0.0) return 0.0;
  const FourierSeries U = model.U(), Um = model.Uminus(), V = model.V();
  const MoireLattice& L = lattice();
  auto norm_at = [&](double s1, double s2) {
    const cplx z = L.point(s1, s2);
    const cplx v = V(z);
    Eigen::Matrix2cd T;
    T << model.alpha0 * v, model.alpha1 * std::conj(Um(z)), model.alpha1 * U(z), model.alpha0 * v;
    return spectral_norm(T);
  };

  struct Cand { double val, s1, s2; };
  std::vector<Cand> cands;
  cands.reserve(std::size_t(grid_m) * grid_m);
  for (int i = 0; i < grid_m; ++i)
    for (int j = 0; j < grid_m; ++j) {
      const double s1 = double(i) / grid_m, s2 = double(j) / grid_m;
      cands.push_back({norm_at(s1, s2), s1, s2});
    }
  const std::size_t keep = std::min<std::size_t>(8, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + keep, cands.end(),
                    [](const Cand& a, const Cand& b) { return a.val > b.val; });

  // Compass search from the best grid points; step starts at one grid cell.
  double best = cands.front().val;
  for (std::size_t c = 0; c < keep; ++c) {
    Cand cur = cands[c];
    double h = 1.0 / grid_m;
    while (h > 1e-12) {
      bool moved = false;
      for (auto [d1, d2] : std::array<std::pair<int, int>, 8>{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}}) {
        const double t1 = cur.s1 + d1 * h, t2 = cur.s2 + d2 * h;
        const double v = norm_at(t1, t2);
        if (v > cur.val) {
          cur = {v, t1, t2};
          moved = true;
          break;
        }
      }
      if (!moved) h /= 2.0;
    }
    best = std::max(best, cur.val);
  }
  return best;
}

double cell_average(const std::function<double(cplx)>& field, int grid_m) {
  const CellGrid g = cell_grid(lattice(), grid_m);
  Accumulator acc;
  for (const auto& p : g.points) acc.add(field(p.z));
  return acc.value() / (double(grid_m) * double(grid_m));
}

double frak_U(const TunnelingModel& model, cplx eta) {
  const double a = model.alpha1;
  if (a == 0.0) return 0.0;
  const FieldSample u = eval_U(model, eta), um = eval_Uminus(model, eta);
  const double d = std::norm(um.value) - std::norm(u.value);
  // d/d(etabar) of conj(U_-(eta)) is conj(d/d(eta) U_-(eta)).
  const cplx w = std::conj(um.dz) - u.dz;
  return a * a / 8.0 * (a * a * d * d + 4.0 * std::norm(w));
}

double ave_frak_U(const TunnelingModel& model, int grid_m) {
  if (model.alpha1 == 0.0) return 0.0;
  const FourierSeries U = model.U(), Um = model.Uminus();
  const FourierSeries dU = U.d_z(), dUm = Um.d_z();
  const double a = model.alpha1;
  return cell_average([&](cplx z) {
    const double d = std::norm(Um(z)) - std::norm(U(z));
    const cplx w = std::conj(dUm(z)) - dU(z);
    return a * a / 8.0 * (a * a * d * d + 4.0 * std::norm(w));
  }, grid_m);
}

SqueezingValue squeezing_condition(const TunnelingModel& model,
                                   const std::function<double(cplx)>& magnetic_B, cplx z) {
  const double a2 = model.alpha1 * model.alpha1;
  const FieldSample u = eval_U(model, z), um = eval_Uminus(model, z);
  const cplx W = a2 * u.value * um.value;
  const cplx dW = a2 * (u.dz * um.value + u.value * um.dz);
  if (std::abs(W) < 1e-14) return {0.0, true};
  const double term = std::imag(dW * std::sqrt(std::conj(W)));
  return {I * (8.0 * std::abs(W) * magnetic_B(z) - 8.0 * term), false};
}

} // namespace magbm
