#include "magbm/landau.hpp"
#include "magbm/potentials.hpp"
#include "magbm/spectra.hpp"
#include "magbm/theta.hpp"
#include "magbm/zero_mode.hpp"
#include "magbm/errors.hpp"

#include <gtest/gtest.h>
#include <cmath>
#include <random>

using namespace magbm;

namespace {

const cplx I(0, 1);

cplx theta_oracle(double a, double b, cplx tau, cplx z, int deriv = 0) {
  cplx s = 0.0;
  for (int n = -60; n <= 60; ++n) {
    const double na = n + a;
    s += std::pow(2.0 * kPi * I * na, deriv) * std::exp(kPi * I * na * na * tau + 2.0 * kPi * I * na * (z + b));
  }
  return s;
}

std::vector<cplx> points(int n, double r, unsigned seed) {
  std::mt19937 g(seed);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<cplx> p;
  for (int i = 0; i < n; ++i) p.emplace_back(u(g), u(g));
  return p;
}

} // namespace

TEST(LandauLevels, Values) {
  EXPECT_EQ(landau_level(0, 30.0), 0.0);
  EXPECT_DOUBLE_EQ(landau_level(1, 30.0), std::sqrt(60.0));
  EXPECT_DOUBLE_EQ(landau_level(-2, 30.0), -std::sqrt(120.0));
  EXPECT_DOUBLE_EQ(landau_level(3, 50.0), std::sqrt(300.0));
  for (int n : {-3, -1, 0, 2, 5}) {
    const double B = 17.0, h = 1e-5;
    const double fd = (landau_level(n, B + h) - landau_level(n, B - h)) / (2 * h);
    EXPECT_NEAR(landau_level_dB(n, B), fd, 1e-8);
  }
  EXPECT_DOUBLE_EQ(landau_level(2, 50.0), std::sqrt(200.0));
  EXPECT_DOUBLE_EQ(landau_level(-1, 8.0), -4.0);
  for (int n = 1; n <= 12; ++n)
    EXPECT_NEAR(std::pow(landau_level(n, 30.0), 2) - std::pow(landau_level(n - 1, 30.0), 2), 60.0, 1e-12);
  EXPECT_THROW(landau_level(1, 0.0), DomainError);
  EXPECT_THROW(landau_level_dB(1, -1.0), DomainError);
}

TEST(Theta, MatchesDirectSum) {
  ThetaParams p;
  for (auto [a, b] : {std::pair{0.5, 0.5}, {0.0, 0.0}, {0.3, -0.2}}) {
    p.a = a;
    p.b = b;
    for (cplx z : points(10, 1.5, 3)) {
      const cplx o = theta_oracle(a, b, p.tau, z);
      EXPECT_LT(std::abs(theta_ab(p, z) - o), 1e-12 * std::max(1.0, std::abs(o)));
    }
  }
}

TEST(Theta, QuasiPeriodicity) {
  ThetaParams p{0.3, 0.1, cplx(0.2, 1.1)};
  for (cplx z : points(10, 1.0, 4)) {
    const cplx t = theta_ab(p, z);
    EXPECT_LT(std::abs(theta_ab(p, z + 1.0) - std::exp(2.0 * kPi * I * p.a) * t), 1e-12 * std::abs(t));
    const cplx f = std::exp(-kPi * I * p.tau - 2.0 * kPi * I * (z + p.b));
    EXPECT_LT(std::abs(theta_ab(p, z + p.tau) - f * t), 1e-11 * std::abs(f * t));
  }
}

TEST(Theta, OddCharacteristicVanishesAtOrigin) {
  ThetaParams p;
  EXPECT_LT(std::abs(theta_ab(p, 0.0)), 1e-15);
  EXPECT_GT(std::abs(theta_ab(p, 0.25)), 1e-2);
}

TEST(Theta, Derivatives) {
  ThetaParams p{0.5, 0.5, lattice().omega};
  const double h = 1e-4;
  for (cplx z : points(5, 0.8, 6)) {
    const auto d = theta_ab_derivs(p, z, 3);
    ASSERT_EQ(d.size(), 4u);
    EXPECT_LT(std::abs(d[0] - theta_ab(p, z)), 1e-14);
    for (int r = 1; r <= 3; ++r) {
      const cplx o = theta_oracle(p.a, p.b, p.tau, z, r);
      EXPECT_LT(std::abs(d[r] - o), 1e-11 * std::max(1.0, std::abs(o))) << r;
    }
    // holomorphic: derivative along the imaginary axis is i f'
    const cplx fy = (theta_ab(p, z + I * h) - theta_ab(p, z - I * h)) / (2 * h);
    EXPECT_LT(std::abs(fy - I * d[1]), 1e-5 * std::max(1.0, std::abs(d[1])));
  }
  EXPECT_THROW(theta_ab(ThetaParams{0.5, 0.5, cplx(0.3, -1)}, 0.0), DomainError);
}

TEST(Theta, TruncationGrowsWithTolerance) {
  ThetaParams p;
  EXPECT_LE(theta_truncation(p, 0.3, 1e-6), theta_truncation(p, 0.3, 1e-18));
  EXPECT_GE(theta_truncation(p, 0.3), 1);
}

TEST(Theta, StableUnderDoubledTruncation) {
  const ThetaParams p;
  for (cplx z : points(20, 2.0, 4)) {
    const int R = 2 * theta_truncation(p, z);
    cplx s = 0.0;
    for (int n = -R; n <= R; ++n) {
      const double na = n + p.a;
      s += std::exp(kPi * I * na * na * p.tau + 2.0 * kPi * I * na * (z + p.b));
    }
    EXPECT_LT(std::abs(theta_ab(p, z) - s), 1e-14 * std::abs(s)) << z;
  }
}

TEST(MagneticTorus, FluxQuantization) {
  for (double lam : {1.0, 0.5, 2.0})
    for (int flux : {1, 2, 3}) {
      const MagneticTorus t = make_magnetic_torus(lam, flux, 0.0);
      EXPECT_NEAR(t.B * t.cell_area(), 2 * kPi * flux, 1e-12);
      EXPECT_NEAR(t.cell_area(), lam * lam * lattice().cell_area, 1e-9);
    }
  EXPECT_THROW(make_magnetic_torus(0.0, 1, 0.0), DomainError);
  EXPECT_THROW(make_magnetic_torus(1.0, 0, 0.0), DomainError);
  EXPECT_THROW(LandauStates(make_magnetic_torus(1.0, 2, 0.0)), DomainError);
  EXPECT_THROW(LandauStates(make_magnetic_torus(1.0, 1, 0.0), 9), DomainError);
}

class LandauStatesTest : public ::testing::TestWithParam<std::tuple<double, cplx>> {};

TEST_P(LandauStatesTest, MagneticTranslationInvariance) {
  const auto [lam, k] = GetParam();
  const MagneticTorus t = make_magnetic_torus(lam, 1, k);
  const LandauStates L(t, 3);
  for (int n = 0; n <= 3; ++n) {
    auto f = [&](cplx z) { return L(n, z); };
    for (cplx z : points(10, 6.0 * lam, 11)) {
      const cplx v = f(z);
      EXPECT_LT(std::abs(magnetic_translate(t, f, 1, 0, z) - v), 1e-11 * std::max(1e-3, std::abs(v)));
      EXPECT_LT(std::abs(magnetic_translate(t, f, 0, 1, z) - v), 1e-11 * std::max(1e-3, std::abs(v)));
    }
  }
}

TEST_P(LandauStatesTest, LadderOperators) {
  const auto [lam, k] = GetParam();
  const MagneticTorus t = make_magnetic_torus(lam, 1, k);
  const double B = t.B;
  const LandauStates L(t, 4);
  const auto pts = points(12, 3.0 * lam, 12);
  const FieldOp a = FieldOp::scalar({cplx(0, -2), 0.0, [&](cplx z) { return cplx(0, -B / 2) * std::conj(z) + std::conj(k); }});
  const FieldOp astar = FieldOp::scalar({0.0, cplx(0, -2), [&](cplx z) { return cplx(0, B / 2) * z + k; }});
  const double h = 1e-2 * lam;
  EXPECT_LT(fd_residual(pts, {[&](cplx z) { return L(0, z); }}, a, h), 1e-9);
  for (int n = 1; n <= 4; ++n) {
    const auto down = fd_apply(pts, {[&](cplx z) { return L(n, z); }}, a, h)[0];
    const auto up = fd_apply(pts, {[&](cplx z) { return L(n - 1, z); }}, astar, h)[0];
    double num_d = 0, num_u = 0, den = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      num_d += std::norm(down[i] - std::sqrt(2 * B * n) * L(n - 1, pts[i]));
      num_u += std::norm(up[i] - std::sqrt(2 * B * n) * L(n, pts[i]));
      den += std::norm(std::sqrt(2 * B * n) * L(n, pts[i])) + std::norm(std::sqrt(2 * B * n) * L(n - 1, pts[i]));
    }
    EXPECT_LT(std::sqrt(num_d / den), 1e-8) << n;
    EXPECT_LT(std::sqrt(num_u / den), 1e-8) << n;
  }
}

TEST_P(LandauStatesTest, Orthonormal) {
  const auto [lam, k] = GetParam();
  const MagneticTorus t = make_magnetic_torus(lam, 1, k);
  const LandauStates L(t, 3);
  const int m = 96;
  for (int p = 0; p <= 3; ++p)
    for (int q = p; q <= 3; ++q) {
      cplx s = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const cplx z = (double(i) / m) * t.gamma1() + (double(j) / m) * t.gamma2();
          s += std::conj(L(p, z)) * L(q, z);
        }
      s *= t.cell_area() / (double(m) * m);
      EXPECT_LT(std::abs(s - (p == q ? 1.0 : 0.0)), 1e-9) << p << "," << q;
    }
}

INSTANTIATE_TEST_SUITE_P(Shapes, LandauStatesTest,
                         ::testing::Values(std::tuple{1.0, cplx(0, 0)}, std::tuple{1.0, cplx(0.3, -0.2)},
                                           std::tuple{0.5, cplx(1.1, 0.7)}, std::tuple{0.5, cplx(0, 0)}));

TEST(PeriodicZeroMode, SolvesFirstOrderEquation) {
  const TorusCell cell = TorusCell::moire();
  std::map<Mode, cplx> A{{{1, 0}, cplx(0.4, 0.1)}, {{-1, 0}, cplx(0.4, -0.1)}, {{1, -2}, cplx(0, 0.3)},
                         {{0, 1}, cplx(-0.2, 0.05)}, {{2, 1}, 0.1}};
  auto A_at = [&](cplx z) {
    cplx s = 0.0;
    for (const auto& [n, c] : A) s += c * std::exp(I * std::real(z * std::conj(cell.momentum(n.m1, n.m2))));
    return s;
  };
  for (auto [variant, dz, dzbar] : {std::tuple{ZeroModeVariant::dz, cplx(0, -2), cplx(0)},
                                    std::tuple{ZeroModeVariant::dzbar, cplx(0), cplx(0, -2)}}) {
    const PeriodicZeroMode psi = periodic_zero_mode(A, cell, variant);
    const FieldOp op = FieldOp::scalar({dz, dzbar, A_at});
    EXPECT_LT(verify_zero_mode(cell, 64, {psi}, op), 1e-11);
    // the wrong operator is far from zero
    const FieldOp other = FieldOp::scalar({dzbar, dz, A_at});
    EXPECT_GT(verify_zero_mode(cell, 64, {psi}, other), 1e-2);
  }
  EXPECT_THROW(periodic_zero_mode({{{0, 0}, 1.0}}, cell), DomainError);
}

TEST(TorusCell, DualBasis) {
  for (const TorusCell& c : {TorusCell::moire(), TorusCell::hexagonal(0.7)}) {
    EXPECT_NEAR(std::real(c.g1 * std::conj(c.h1())), 2 * kPi, 1e-12);
    EXPECT_NEAR(std::real(c.g2 * std::conj(c.h2())), 2 * kPi, 1e-12);
    EXPECT_NEAR(std::real(c.g1 * std::conj(c.h2())), 0.0, 1e-12);
    EXPECT_NEAR(std::real(c.g2 * std::conj(c.h1())), 0.0, 1e-12);
  }
  EXPECT_NEAR(TorusCell::moire().area(), lattice().cell_area, 1e-9);
}

TEST(LandauStates, DualShiftOfMomentum) {
  // psi_{0,k+k'} = c e^{-i Re(z conj k')} psi_{0,k} with one unimodular constant c
  for (double lam : {1.0, 0.5}) {
    const cplx k(0.3, -0.2);
    for (cplx kp : {lattice().eta1 / lam, (lattice().eta2 - 2.0 * lattice().eta1) / lam}) {
      const MagneticTorus t = make_magnetic_torus(lam, 1, k), t2 = make_magnetic_torus(lam, 1, k + kp);
      cplx c0 = 0.0;
      for (cplx z : points(12, 3.0, 21)) {
        const cplx r = psi0_bloch(t2, z) / (std::exp(-I * std::real(z * std::conj(kp))) * psi0_bloch(t, z));
        if (c0 == 0.0) c0 = r;
        EXPECT_NEAR(std::abs(r), 1.0, 1e-10);
        EXPECT_LT(std::abs(r - c0), 1e-10);
      }
    }
  }
}

TEST(PeriodicZeroMode, Examples) {
  const TorusCell cell = TorusCell::moire();
  const PeriodicZeroMode one = periodic_zero_mode({}, cell);
  for (cplx z : points(5, 10.0, 2)) EXPECT_EQ(one(z), cplx(1.0));

  // single mode: the closed-form coefficient on the hexagonal cell z = lambda (w x1 + w^2 x2)
  const cplx w = lattice().omega;
  for (double lam : {1.0, 0.7})
    for (Mode n : {Mode{1, 0}, Mode{0, 1}, Mode{2, -1}}) {
      const TorusCell hex = TorusCell::hexagonal(lam);
      const cplx pre = std::sqrt(3.0) * lam * I / (4 * kPi);
      const cplx bar = periodic_zero_mode({{n, 1.0}}, hex, ZeroModeVariant::dzbar).phi.at(n);
      const cplx dz = periodic_zero_mode({{n, 1.0}}, hex, ZeroModeVariant::dz).phi.at(n);
      EXPECT_LT(std::abs(bar - pre / (double(n.m1) * w * w - double(n.m2) * w)), 1e-15);
      EXPECT_LT(std::abs(dz - pre / (double(n.m2) * w * w - double(n.m1) * w)), 1e-15);
      // -2i dzbar phi = A, symbolically: the symbol of -2i dzbar is the momentum
      EXPECT_LT(std::abs(hex.momentum(n.m1, n.m2) * bar - 1.0), 1e-12);
    }

  // A1 = 2 sqrt 3 cos(Im z), A2 = 0
  const double s3 = std::sqrt(3.0);
  const std::map<Mode, cplx> A{{{1, 1}, s3}, {{-1, -1}, s3}};
  auto A_at = [&](cplx z) { return cplx(2 * s3 * std::cos(z.imag())); };
  for (cplx z : points(5, 5.0, 3)) {
    cplx s = 0.0;
    for (const auto& [n, c] : A) s += c * plane_wave(cell.momentum(n.m1, n.m2), z);
    EXPECT_LT(std::abs(s - A_at(z)), 1e-13);
  }
  for (auto [variant, dz, dzbar] : {std::tuple{ZeroModeVariant::dz, cplx(0, -2), cplx(0)},
                                    std::tuple{ZeroModeVariant::dzbar, cplx(0), cplx(0, -2)}}) {
    const PeriodicZeroMode psi = periodic_zero_mode(A, cell, variant);
    for (cplx z : points(20, 30.0, 5)) {
      EXPECT_LT(std::abs(psi(z).imag()), 1e-13 * std::abs(psi(z)));
      EXPECT_GT(psi(z).real(), 0.0);
      EXPECT_LT(std::abs(psi(z + cell.g1) - psi(z)), 1e-12 * std::abs(psi(z)));
      EXPECT_LT(std::abs(psi(z + cell.g2) - psi(z)), 1e-12 * std::abs(psi(z)));
    }
    EXPECT_LT(verify_zero_mode(cell, 128, {psi}, FieldOp::scalar({dz, dzbar, A_at})), 1e-8);
  }
}

TEST(VerifyZeroMode, VanishingOperator) {
  auto trig = [](cplx z) {
    return 0.3 * plane_wave(lattice().dual(1, 0), z) - cplx(0.1, 0.7) * plane_wave(lattice().dual(-2, 3), z) + 2.0;
  };
  EXPECT_EQ(verify_zero_mode(TorusCell::moire(), 32, {trig}, FieldOp::scalar({0.0, 0.0, [](cplx) { return cplx(0.0); }})), 0.0);
}

TEST(VerifyZeroMode, MagneticFactorTimesFlatBandMode) {
  // chi: zero mode of D_c(k) at the magic angle without field; psi: (2D_zbar - A) psi = 0.
  // psi chi is then a zero mode of D_c(k) with the periodic potential A.
  const double alpha = 0.5856635583896, s3 = std::sqrt(3.0);
  const cplx k(0.3, 0.2);
  FloquetProblem pr;
  pr.model = TunnelingModel::chiral(alpha);
  pr.k = k;
  pr.N = 18;
  const ChiralZeroMode chi = chiral_zero_mode(pr);
  ASSERT_LT(chi.sigma, 1e-8);

  const TorusCell cell = TorusCell::moire();
  const std::map<Mode, cplx> A{{{1, 1}, s3}, {{-1, -1}, s3}, {{1, -2}, cplx(0, 0.4)}, {{-1, 2}, cplx(0, -0.4)}};
  std::map<Mode, cplx> minusA;
  for (const auto& [n, c] : A) minusA[n] = -c;
  const PeriodicZeroMode psi = periodic_zero_mode(minusA, cell, ZeroModeVariant::dzbar);
  auto A_at = [&](cplx z) {
    cplx s = 0.0;
    for (const auto& [n, c] : A) s += c * plane_wave(cell.momentum(n.m1, n.m2), z);
    return s;
  };
  const FourierSeries U = pr.model.U(), Um = pr.model.Uminus();
  FieldOp D;
  D.n = 2;
  const FieldOp::Entry diag{0.0, cplx(0, -2), [&](cplx z) { return k - A_at(z); }};
  D.entries = {diag, {0.0, 0.0, [&](cplx z) { return alpha * U(z); }}, {0.0, 0.0, [&](cplx z) { return alpha * Um(z); }}, diag};
  const Field f1 = [&](cplx z) { return psi(z) * chi.u1(z); }, f2 = [&](cplx z) { return psi(z) * chi.u2(z); };
  EXPECT_LT(verify_zero_mode(cell, 64, {f1, f2}, D), 1e-6);
  // without the magnetic factor the same operator does not annihilate chi
  EXPECT_GT(verify_zero_mode(cell, 64, {[&](cplx z) { return chi.u1(z); }, [&](cplx z) { return chi.u2(z); }}, D), 1e-2);
}
