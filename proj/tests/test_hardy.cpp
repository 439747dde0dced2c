#include <cmath>
#include <random>

#include "doctest.h"
#include "nchardy/error.hpp"
#include "nchardy/hardy.hpp"

using namespace nchardy;

namespace {

Matrix random_matrix(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

// Random tuple rescaled so that lambda_max(p sum X_i^* X_i) = theta.
MatrixTuple contraction(int m, int n, double p, double theta, std::mt19937_64& rng) {
  std::vector<Matrix> mats;
  for (int k = 0; k < m; ++k) mats.push_back(random_matrix(n, rng));
  MatrixTuple x(m, mats);
  const double s = std::sqrt(theta / column_contraction(x, p));
  for (auto& a : mats) a *= s;
  return MatrixTuple(m, std::move(mats));
}

NcSeries random_series(int m, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  NcSeries f(m);
  for (const auto& w : words_up_to(m, degree)) f.add(w, Complex(g(rng), g(rng)));
  return f;
}

MatrixTuple scalars(std::vector<Complex> xs) {
  std::vector<Matrix> mats;
  for (auto x : xs) mats.push_back(Matrix::Constant(1, 1, x));
  return MatrixTuple(static_cast<int>(xs.size()), std::move(mats));
}

NcSeries symmetric_series() {
  NcSeries f(2);
  f.add({1, 2}, 1.0).add({2, 1}, 1.0);
  return f;
}

EngineConfig exact_config() { return EngineConfig{}; }

}  // namespace

TEST_SUITE("hardy") {

TEST_CASE("inner products") {
  const auto f = symmetric_series();
  CHECK(inner_product(f, f, SpaceKind::polydisc(2)) == Complex(2.0));
  CHECK(inner_product(f, f, SpaceKind::ball(2)) == Complex(0.5));
  const auto x1 = NcSeries::monomial(2, {1});
  CHECK(inner_product(x1, x1, SpaceKind::ball(2)) == Complex(0.5));
  CHECK(inner_product(x1, NcSeries::monomial(2, {2}), SpaceKind::polydisc(2)) == Complex{});
  // conjugate-linear in the second slot
  const auto ix = NcSeries::monomial(2, {1}, Complex(0.0, 1.0));
  CHECK(inner_product(x1, ix, SpaceKind::polydisc(2)) == Complex(0.0, -1.0));
  CHECK_THROWS_AS(inner_product(x1, NcSeries(3), SpaceKind::polydisc(2)), Error);
}

TEST_CASE("monomials are orthonormal (|w| <= 4, m <= 3)") {
  for (int m = 1; m <= 3; ++m) {
    const auto words = words_up_to(m, m == 3 ? 3 : 4);
    for (const auto& w : words)
      for (const auto& v : words) {
        const auto a = NcSeries::monomial(m, w);
        const auto b = NcSeries::monomial(m, v);
        const Complex pd = inner_product(a, b, SpaceKind::polydisc(m));
        CHECK(pd == Complex(w == v ? 1.0 : 0.0));
        // normalized ball monomials m^{|w|/2} X^w
        const double s = std::pow(m, 0.5 * w.size()) * std::pow(m, 0.5 * v.size());
        const Complex ball = s * inner_product(a, b, SpaceKind::ball(m));
        CHECK(std::abs(ball - Complex(w == v ? 1.0 : 0.0)) <= 8 * 2.3e-16);
      }
  }
  // the highest-degree case with m = 3
  const Word w{1, 2, 3, 1};
  const auto a = NcSeries::monomial(3, w);
  CHECK(inner_product(a, a, SpaceKind::polydisc(3)) == Complex(1.0));
  CHECK(inner_product(a, a, SpaceKind::ball(3)).real() == doctest::Approx(1.0 / 81.0));
}

TEST_CASE("Parseval: radial pairing at r = 1 is the coefficient inner product") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 3;
    const auto f = random_series(m, 3, rng);
    const auto g = random_series(m, 3, rng);
    for (auto kind : {SpaceKind::polydisc(m), SpaceKind::ball(m)}) {
      const Complex rp = radial_pairing(f, g, kind, {1.0}).front();
      CHECK(std::abs(rp - inner_product(f, g, kind)) <= 1e-12 * (1.0 + std::abs(rp)));
    }
    const double nf = l2p_norm(f, 1.0);
    CHECK(inner_product(f, f, SpaceKind::polydisc(m)).real() ==
          doctest::Approx(nf * nf).epsilon(1e-13));
  }
}

TEST_CASE("pairing grid: exact values of X1X2 + X2X1 and scaling") {
  const auto f = symmetric_series();
  const auto cells = pairing_grid(f, f, BoundaryKind::polydisc(2), {1.0, 0.5}, {1, 2, 4, 8},
                                  exact_config());
  CHECK(cells.size() == 8);
  for (const auto& c : cells) {
    REQUIRE(c.exact);
    CHECK_FALSE(c.mc);
    const double want = std::pow(c.r, 4) * 2.0 * (1.0 + 1.0 / (c.N * c.N));
    CHECK(c.exact->real() == doctest::Approx(want).epsilon(1e-15));
    CHECK(c.value() == *c.exact);
  }
  CHECK_THROWS_AS(pairing_grid(f, f, BoundaryKind::polydisc(2), {}, {2}, exact_config()), Error);
  CHECK_THROWS_AS(pairing_grid(f, f, BoundaryKind::polydisc(2), {1.0}, {0}, exact_config()), Error);
}

TEST_CASE("engine = both: exact within 3 SE of Monte Carlo in >= 99% of cells") {
  std::mt19937_64 rng(21);
  EngineConfig cfg;
  cfg.engine = Engine::both;
  cfg.samples = 5000;
  cfg.stream = SeededStream{99, 0};
  std::size_t cells = 0, ok = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 1 + trial % 2;
    const auto f = random_series(m, 2, rng);
    const auto g = random_series(m, 2, rng);
    const auto kind = trial % 3 == 0 ? BoundaryKind::polydisc(m) : BoundaryKind::ball_column(m);
    cfg.stream = cfg.stream.derive(trial);
    for (const auto& c : pairing_grid(f, g, kind, {0.5, 1.0}, {2, 4, 8}, cfg)) {
      REQUIRE(c.exact);
      REQUIRE(c.mc);
      ++cells;
      const auto d = c.delta_in_std_errors();
      if (!d || std::abs(*d) <= 3.0) ++ok;
    }
  }
  CAPTURE(ok);
  CAPTURE(cells);
  CHECK(static_cast<double>(ok) >= 0.99 * cells);
}

TEST_CASE("coefficient recovery examples") {
  const auto f = NcSeries::monomial(1, {1}, 3.0);
  const auto rec = coeff_recover(f, {1}, 1.0, BoundaryKind::polydisc(1), {2, 4, 8}, exact_config());
  CHECK(rec.recovered.real() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(rec.trend.size() == 2);
  for (const auto& t : rec.trend) CHECK(std::abs(t) <= 1e-14);

  // X1X2 + X2X1, word (1,2): 1 + 1/N^2 on the polydisc
  const auto g = symmetric_series();
  const auto r2 = coeff_recover(g, {1, 2}, 0.5, BoundaryKind::polydisc(2), {2, 4, 8}, exact_config());
  CHECK(r2.cells[0].exact->real() == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(r2.cells[1].exact->real() == doctest::Approx(1.0625).epsilon(1e-14));
  CHECK(r2.cells[2].exact->real() == doctest::Approx(1.015625).epsilon(1e-14));

  // lengths that f does not contain recover exactly 0
  for (const Word& w : {Word{}, Word{1}, Word{2, 1, 1}}) {
    const auto z = coeff_recover(g, w, 0.5, BoundaryKind::polydisc(2), {2, 4}, exact_config());
    CHECK(z.recovered == Complex{});
  }

  // ball: m^{|w|} rescaling recovers X_1 with coefficient 1 exactly
  const auto x1 = NcSeries::monomial(2, {1});
  const auto rb = coeff_recover(x1, {1}, 0.7, BoundaryKind::ball_column(2), {2, 3}, exact_config());
  for (const auto& c : rb.cells) CHECK(c.exact->real() == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(coeff_recover(g, {3}, 1.0, BoundaryKind::polydisc(2), {2}, exact_config()), Error);
  CHECK_THROWS_AS(coeff_recover(g, {1}, 0.0, BoundaryKind::polydisc(2), {2}, exact_config()), Error);
}

TEST_CASE("recovery of random polynomials tends to the coefficient") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 1 + trial % 2;
    const auto f = random_series(m, 3, rng);
    for (auto kind : {BoundaryKind::polydisc(m), BoundaryKind::ball_column(m)}) {
      for (const auto& w : words_up_to(m, 2)) {
        const auto rec = coeff_recover(f, w, 0.8, kind, {4, 16}, exact_config());
        const Complex want = f.coefficient(w);
        const double e4 = std::abs(rec.cells[0].value() - want);
        const double e16 = std::abs(rec.cells[1].value() - want);
        CAPTURE(trial);
        CHECK(e16 <= 0.3 * e4 + 1e-12);
      }
    }
  }
}

TEST_CASE("boundary norm profiles") {
  const auto f = symmetric_series();
  const auto prof = boundary_norm_profile(f, BoundaryKind::polydisc(2), {0.5, 1.0}, {1, 2, 4},
                                          exact_config());
  CHECK(prof.sup_estimate == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(prof.sup_cell.N == 1);
  CHECK(prof.sup_cell.r == 1.0);
  CHECK(prof.corner.N == 4);
  CHECK(prof.corner.r == 1.0);
  CHECK(prof.norm_squared == doctest::Approx(2.0));
  // the profile is non-decreasing in r
  for (const auto& a : prof.cells)
    for (const auto& b : prof.cells)
      if (a.N == b.N && a.r < b.r) CHECK(a.value().real() <= b.value().real());
}

TEST_CASE("radial profiles Phi and Psi") {
  const auto x1 = NcSeries::monomial(2, {1});
  const std::vector<double> rs{0.25, 0.5, 1.0};
  const auto prof = radial_boundary_profiles(x1, rs, {2, 4}, exact_config());
  REQUIRE(prof.phi.size() == 6);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(prof.phi_series[i] == doctest::Approx(rs[i] * rs[i]));
    CHECK(prof.psi_series[i] == doctest::Approx(rs[i] * rs[i] / 2.0));
  }
  for (const auto& c : prof.phi) CHECK(c.exact->real() == doctest::Approx(c.r * c.r));
  for (const auto& c : prof.psi) CHECK(c.exact->real() == doctest::Approx(c.r * c.r / 2.0));
}

TEST_CASE("Upsilon verdicts") {
  const MatrixTuple half(2, {0.5 * Matrix::Identity(2, 2), 0.5 * Matrix::Identity(2, 2)});
  auto v = upsilon_membership(half, 1.0, 12);
  CHECK(v.status == UpsilonStatus::converged_with_bound);
  CHECK(v.theta == doctest::Approx(0.5));
  CHECK(v.bound == doctest::Approx(2.0));
  CHECK(v.checked_degree == 12);

  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = 3.0;
  v = upsilon_membership(MatrixTuple(2, {j, Matrix::Zero(2, 2)}), 1.0, 12);
  CHECK(v.theta == doctest::Approx(9.0));
  CHECK(v.status == UpsilonStatus::converged_with_bound);
  CHECK(v.checked_degree == 2);
  CHECK(v.bound == doctest::Approx(10.0));

  v = upsilon_membership(scalars({1.0, 0.0}), 1.0, 12);
  CHECK(v.status == UpsilonStatus::diverged_at_degree);
  CHECK(v.diverged_degree == 3);

  // theta >= 1 with decaying strata stays undecided
  Matrix d = Matrix::Zero(2, 2);
  d(0, 1) = 1.2;
  d(1, 1) = 0.5;
  v = upsilon_membership(MatrixTuple(1, {d}), 1.0, 6);
  CHECK(v.theta >= 1.0);
  CHECK(v.status == UpsilonStatus::inconclusive);

  CHECK_THROWS_AS(upsilon_membership(half, 0.0), Error);
  CHECK_THROWS_AS(upsilon_membership(half, 1.0, -1), Error);
}

TEST_CASE("Upsilon partial sums are monotone and below the bound") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + trial % 3;
    const double p = trial % 2 ? 1.0 : 0.5;
    const double theta = 0.1 + 0.85 * (trial % 10) / 10.0;
    const auto x = contraction(m, 3, p, theta, rng);
    const auto v = upsilon_membership(x, p, 12);
    REQUIRE(v.status == UpsilonStatus::converged_with_bound);
    for (std::size_t l = 1; l < v.partial_sum_norms.size(); ++l)
      CHECK(v.partial_sum_norms[l] >= v.partial_sum_norms[l - 1] * (1.0 - 1e-12));
    CHECK(v.partial_sum_norms.back() <= v.bound * (1.0 + 1e-12));
  }
}

TEST_CASE("kernel values") {
  std::mt19937_64 rng(24);
  const auto x = contraction(2, 2, 1.0, 0.5, rng);
  const auto k0 = kernel_eval(x, MatrixTuple::zero(2, 3), 1.0, 8);
  CHECK(k0.value.isApprox(Matrix::Identity(6, 6)));

  const auto ks = kernel_eval(scalars({0.5}), scalars({0.4}), 1.0, 60);
  CHECK(ks.value(0, 0).real() == doctest::Approx(1.25).epsilon(1e-14));
  REQUIRE(ks.tail_bound);

  CHECK(kron(Matrix::Identity(2, 2), Matrix::Identity(3, 3)) == Matrix::Identity(6, 6));
  const Matrix a = random_matrix(2, rng), b = random_matrix(3, rng);
  CHECK(swap_tensor_factors(kron(a, b), 2, 3).isApprox(kron(b, a)));
}

TEST_CASE("kernel adjoint: K(Y, X) is the swapped adjoint of K(X, Y)") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = contraction(2, 2, 1.0, 0.4, rng);
    const auto y = contraction(2, 3, 1.0, 0.4, rng);
    const Matrix kxy = kernel_eval(x, y, 1.0, 10).value;
    const Matrix kyx = kernel_eval(y, x, 1.0, 10).value;
    CHECK((kyx - swap_tensor_factors(kxy, 2, 3).adjoint()).norm() <= 1e-12 * kyx.norm());
  }
}

TEST_CASE("kernel tail bound holds against a long truncation") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = 0.2 + 0.07 * trial;
    const auto x = contraction(2, 2, 1.0, t, rng);
    const auto y = contraction(2, 2, 1.0, t, rng);
    const auto ref = kernel_eval(x, y, 1.0, 60);
    for (int L : {3, 6, 12}) {
      const auto k = kernel_eval(x, y, 1.0, L);
      REQUIRE(k.tail_bound);
      const double err = Eigen::JacobiSVD<Matrix>(ref.value - k.value).singularValues()(0);
      CHECK(err <= *k.tail_bound + 1e-14);
    }
  }
  // without contraction no bound is claimed
  const auto big = kernel_eval(scalars({1.0}), scalars({1.0}), 1.0, 5);
  CHECK_FALSE(big.tail_bound);
}

TEST_CASE("kernel Gram matrices are positive semidefinite") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 3;
    std::vector<MatrixTuple> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(contraction(m, 2, 1.0, 0.3 + 0.05 * i, rng));
    for (int L : {0, 1, 4, 10}) {
      const auto g = kernel_gram(pts, 1.0, L);
      CHECK(g.gram.isApprox(g.gram.adjoint()));
      const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(g.gram).eigenvalues().minCoeff();
      CHECK(min_eig >= -1e-10 * (1.0 + g.gram.norm()));
    }
  }
}

TEST_CASE("reproducing property") {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 3;
    const double p = trial % 2 ? 1.0 : 2.0;
    const auto f = random_series(m, 3, rng);
    const auto y = contraction(m, 2, p, 0.5, rng);
    const Vector e1 = random_matrix(2, rng).col(0);
    const Vector e2 = random_matrix(2, rng).col(1);
    const auto r = reproduce_check(f, y, e1, e2, p);
    CHECK(r.residual <= 1e-10);
    const Complex direct = (e2.adjoint() * series_eval(f, y) * e1)(0, 0);
    CHECK(std::abs(r.rhs - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
  // f = 1: <1, e1^* K(., Y) e2> = e2^* e1
  const auto one = NcSeries::monomial(1, {});
  Vector e(2);
  e << 1.0, 0.0;
  const auto r = reproduce_check(one, MatrixTuple::zero(1, 2), e, e, 1.0);
  CHECK(std::abs(r.lhs - 1.0) <= 1e-15);
}

}  // TEST_SUITE
