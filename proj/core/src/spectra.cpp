#include "magbm/spectra.hpp"
#include "magbm/errors.hpp"
#include "magbm/krylov.hpp"
#include "magbm/parallel.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace magbm {

namespace {

const cplx I(0.0, 1.0);

void check_k(cplx k) {
  if (lattice().distance_to_dual(k) < 1e-8) throw NumericError("k in dual lattice: resolvent is singular");
}

bool before_bs(cplx a, cplx b) {
  const double x = std::abs(a), y = std::abs(b);
  if (x != y) return x > y;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::vector<int> sectors_for(int requested, std::initializer_list<const FourierSeries*> fields) {
  if (requested >= 0) return {requested};
  for (const FourierSeries* f : fields)
    if (!f->empty() && !PlaneWaveBasis::sector_preserving(*f)) return {-1};
  return {0, 1, 2};
}

std::vector<cplx> general_eigenvalues(Eigen::MatrixXcd M) {
  const int n = int(M.rows());
  std::vector<cplx> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, M.data(), n, w.data(), nullptr, 1,
                                        nullptr, 1);
  if (info != 0) throw NumericError("zgeev failed with info " + std::to_string(info));
  return w;
}

std::vector<cplx> bs_eigenvalues(const TunnelingModel& model, cplx k, const FourierSeries& A, int N, int sector) {
  const FourierSeries U = model.U(), Um = model.Uminus();
  std::vector<cplx> out;
  for (int s : sectors_for(sector, {&A})) {
    PlaneWaveBasis basis(N, k, 1, s);
    const Eigen::VectorXcd sym = basis.symbol();
    if (sym.cwiseAbs().minCoeff() < 1e-10) throw NumericError("k in dual lattice: resolvent is singular");
    Eigen::MatrixXcd D = -basis.convolution(A);
    D.diagonal() += sym;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(D);
    const Eigen::MatrixXcd X = lu.solve(basis.convolution(U));
    const Eigen::MatrixXcd Y = lu.solve(basis.convolution(Um));
    // T^2 = diag(X Y, Y X); each mu gives the pair +-sqrt(mu).
    for (cplx mu : general_eigenvalues(X * Y)) {
      const cplx r = std::sqrt(mu);
      out.push_back(r);
      out.push_back(-r);
    }
  }
  std::sort(out.begin(), out.end(), before_bs);
  return out;
}

double nearest(const std::vector<cplx>& set, cplx z) {
  double d = std::numeric_limits<double>::infinity();
  for (cplx w : set) d = std::min(d, std::abs(w - z));
  return d;
}

} // namespace

SpectralResult birman_schwinger_spectrum(const TunnelingModel& model, cplx k, const FourierSeries& A, int N,
                                         const BSOptions& opt) {
  if (N < 8) throw DomainError("birman_schwinger_spectrum: N must be at least 8");
  check_k(k);
  SpectralResult r;
  r.truncation_N = N;
  r.eigenvalues = bs_eigenvalues(model, k, A, N, opt.sector);
  if (opt.compute_gap) {
    const std::vector<cplx> coarse = bs_eigenvalues(model, k, A, N - 4, opt.sector);
    const int c = std::min<int>(opt.gap_count, int(r.eigenvalues.size()));
    for (int i = 0; i < c; ++i) {
      r.gaps.push_back(nearest(coarse, r.eigenvalues[std::size_t(i)]));
      r.convergence_gap = std::max(r.convergence_gap, r.gaps.back());
    }
  }
  return r;
}

MagicAlphas magic_alphas(const SpectralResult& r, double R) {
  MagicAlphas m;
  for (cplx l : r.eigenvalues) {
    if (std::abs(l) < 1.0 / R) continue;
    const cplx a = 1.0 / l;
    if (std::abs(l.imag()) < 1e-8) {
      if (a.real() > 0.0) m.real.push_back(a.real());
    } else if (a.real() > 0.0) {
      m.complex.push_back(a);
    }
  }
  std::sort(m.real.begin(), m.real.end());
  std::sort(m.complex.begin(), m.complex.end(), [](cplx a, cplx b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a.imag() < b.imag();
  });
  return m;
}

Eigen::SparseMatrix<cplx> assemble_D(const FloquetProblem& pr, const PlaneWaveBasis& b) {
  const int n = b.modes();
  const Eigen::VectorXcd sym = b.symbol();
  const TunnelingModel& m = pr.model;
  const cplx ph = std::polar(1.0, pr.theta / 2.0);
  std::vector<Eigen::Triplet<cplx>> t;
  auto append = [&t](std::vector<Eigen::Triplet<cplx>>&& more) { t.insert(t.end(), more.begin(), more.end()); };

  switch (pr.variant) {
    case Variant::chiral:
    case Variant::semiclassical: {
      const bool semi = pr.variant == Variant::semiclassical;
      const cplx f = semi ? ph : cplx(1.0);
      const double scale = semi ? pr.theta : 1.0;
      for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < n; ++i) t.emplace_back(b.row(i, c), b.row(i, c), f * scale * sym[i]);
        append(b.convolution_triplets(pr.A, c, c, -f));
      }
      append(b.convolution_triplets(m.U(), 0, 1, m.alpha1));
      append(b.convolution_triplets(m.Uminus(), 1, 0, m.alpha1));
      break;
    }
    case Variant::antichiral: {
      const FourierSeries V = m.V();
      append(b.convolution_triplets(V, 0, 0, m.alpha0));
      append(b.convolution_triplets(V.conj_field(), 1, 1, m.alpha0));
      for (int i = 0; i < n; ++i) {
        t.emplace_back(b.row(i, 0), b.row(i, 1), ph * sym[i]);
        t.emplace_back(b.row(i, 1), b.row(i, 0), ph * std::conj(sym[i]));
      }
      append(b.convolution_triplets(pr.A, 0, 1, -ph));
      append(b.convolution_triplets(pr.A.conj_field(), 1, 0, -ph));
      break;
    }
  }
  Eigen::SparseMatrix<cplx> D(b.dim(), b.dim());
  D.setFromTriplets(t.begin(), t.end());
  D.prune(cplx(0.0));
  D.makeCompressed();
  return D;
}

Eigen::SparseMatrix<cplx> assemble_H(const FloquetProblem& pr, const PlaneWaveBasis& b) {
  const Eigen::SparseMatrix<cplx> D = assemble_D(pr, b);
  const int d = int(D.rows());
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(std::size_t(2 * D.nonZeros()));
  for (int col = 0; col < D.outerSize(); ++col)
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(D, col); it; ++it) {
      t.emplace_back(d + int(it.row()), int(it.col()), it.value());
      t.emplace_back(int(it.col()), d + int(it.row()), std::conj(it.value()));
    }
  Eigen::SparseMatrix<cplx> H(2 * d, 2 * d);
  H.setFromTriplets(t.begin(), t.end());
  H.makeCompressed();
  return H;
}

namespace {

struct SigmaResult {
  std::vector<double> sigma;
  double residual = 0.0;
};

SigmaResult smallest_singular_values(const Eigen::SparseMatrix<cplx>& D, int q, int dense_limit) {
  SigmaResult r;
  const int d = int(D.rows());
  q = std::min(q, d);
  if (d <= dense_limit) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd{Eigen::MatrixXcd(D)};
    const Eigen::VectorXd s = svd.singularValues();
    for (int i = 0; i < q; ++i) r.sigma.push_back(s[d - 1 - i]);
    return r;
  }
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(D);
  if (lu.info() != Eigen::Success) throw NumericError("sparse LU failed: operator is singular to working precision");
  // (D^* D)^{-1} = D^{-1} D^{-*}
  BlockOp op = [&lu](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
    const Eigen::MatrixXcd tmp = lu.adjoint().solve(in);
    out = lu.solve(tmp);
  };
  const KrylovResult kr = hermitian_extreme_eigs(op, d, q);
  if (!kr.converged) throw NumericError("eigensolver did not converge");
  for (double t : kr.values) r.sigma.push_back(1.0 / std::sqrt(std::max(t, 1e-300)));
  std::sort(r.sigma.begin(), r.sigma.end());
  r.residual = kr.max_residual;
  return r;
}

std::vector<cplx> band_values(const FloquetProblem& pr, int count, const BandOptions& opt, int N, double* resid) {
  // Only the chiral forms carry the resolvent symbol p + k on the diagonal.
  if (pr.variant != Variant::antichiral) check_k(pr.k);
  const FourierSeries U = pr.model.U();
  const std::vector<int> secs = sectors_for(pr.sector, {&pr.A, &U});
  const int q = (count + 1) / 2;
  std::vector<SigmaResult> parts(secs.size());
  parallel_for(int(secs.size()), [&](int i) {
    PlaneWaveBasis basis(N, pr.k, 2, secs[std::size_t(i)]);
    parts[std::size_t(i)] = smallest_singular_values(assemble_D(pr, basis), q, opt.dense_limit);
  });
  std::vector<double> all;
  for (const auto& p : parts) {
    all.insert(all.end(), p.sigma.begin(), p.sigma.end());
    if (resid) *resid = std::max(*resid, p.residual);
  }
  std::sort(all.begin(), all.end());
  all.resize(std::min<std::size_t>(all.size(), std::size_t(q)));
  std::vector<cplx> ev;
  for (double s : all) {
    ev.push_back(-s);
    ev.push_back(s);
  }
  if (int(ev.size()) > count) ev.pop_back();
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return ev;
}

} // namespace

SpectralResult floquet_bands(const FloquetProblem& pr, int count, const BandOptions& opt) {
  if (count < 1) throw DomainError("floquet_bands: count must be positive");
  SpectralResult r;
  r.truncation_N = pr.N;
  r.eigenvalues = band_values(pr, count, opt, pr.N, &r.solver_residual);
  if (opt.compute_gap && pr.N > 4) {
    const std::vector<cplx> coarse = band_values(pr, count, opt, pr.N - 4, nullptr);
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      const double g = i < coarse.size() ? std::abs(coarse[i] - r.eigenvalues[i]) : nearest(coarse, r.eigenvalues[i]);
      r.gaps.push_back(g);
      r.convergence_gap = std::max(r.convergence_gap, g);
    }
  }
  return r;
}

ChiralZeroMode chiral_zero_mode(const FloquetProblem& pr) {
  if (pr.variant != Variant::chiral) throw DomainError("chiral_zero_mode: chiral variant required");
  check_k(pr.k);
  const int sector = pr.sector >= 0 ? pr.sector : (PlaneWaveBasis::sector_preserving(pr.A) ? 0 : -1);
  PlaneWaveBasis basis(pr.N, pr.k, 2, sector);
  const Eigen::MatrixXcd D(assemble_D(pr, basis));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(D, Eigen::ComputeThinV);
  const int last = int(D.cols()) - 1;
  const Eigen::VectorXcd v = svd.matrixV().col(last);
  ChiralZeroMode z;
  z.sigma = svd.singularValues()[last];
  for (int i = 0; i < basis.modes(); ++i) {
    z.u1.coeff[basis.mode(i)] = v[basis.row(i, 0)];
    z.u2.coeff[basis.mode(i)] = v[basis.row(i, 1)];
  }
  return z;
}

std::function<double(cplx)> magnetic_field_of(const FourierSeries& A) {
  const FourierSeries dA = A.d_z();
  return [dA](cplx z) { return 2.0 * std::imag(dA(z)); };
}

SqueezeReport squeezing_study(const TunnelingModel& model, const FourierSeries& A,
                              const std::vector<double>& thetas, cplx k, const SqueezeOptions& opt) {
  if (thetas.size() < 5) throw DomainError("squeezing_study: need at least five theta values");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] > 0.0)) throw DomainError("squeezing_study: theta must be positive");
    if (i > 0 && !(thetas[i] < thetas[i - 1])) throw DomainError("squeezing_study: theta list must decrease");
  }
  SqueezeReport rep;
  rep.thetas = thetas;

  const auto Bf = magnetic_field_of(A);
  const CellGrid g = cell_grid(lattice(), opt.condition_grid);
  for (const auto& p : g.points) {
    const SqueezingValue v = squeezing_condition(model, Bf, p.z);
    if (!v.branch_ambiguous) rep.condition_max = std::max(rep.condition_max, std::abs(v.value));
  }
  rep.condition_ok = rep.condition_max > opt.condition_tol;

  rep.E0.assign(thetas.size(), 0.0);
  rep.N.assign(thetas.size(), 0);
  for (std::size_t i = 0; i < thetas.size(); ++i)
    rep.N[i] = opt.N > 0 ? opt.N : int(std::ceil(opt.modes_per_inverse_theta / thetas[i]));
  parallel_for(int(thetas.size()), [&](int i) {
    FloquetProblem pr{model, Variant::semiclassical, thetas[std::size_t(i)], A, k, rep.N[std::size_t(i)], opt.sector};
    const SpectralResult r = floquet_bands(pr, 1);
    rep.E0[std::size_t(i)] = std::abs(r.eigenvalues.front());
  });

  const int n = int(thetas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = 1.0 / thetas[std::size_t(i)], y = std::log(rep.E0[std::size_t(i)]);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  rep.slope = cxy / vx;
  rep.intercept = (sy - rep.slope * sx) / n;
  rep.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return rep;
}

} // namespace magbm
