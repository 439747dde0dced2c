#include <cmath>
#include <random>

#include "doctest.h"
#include "nchardy/error.hpp"
#include "nchardy/weingarten.hpp"

using namespace nchardy;

namespace {

// Independent oracle: invert the full n! x n! Gram matrix numerically.
Eigen::VectorXd gram_inverse_column(int n, int N) {
  const auto perms = all_permutations(n);
  const auto k = static_cast<Eigen::Index>(perms.size());
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      g(i, j) = std::pow(static_cast<double>(N), (perms[i] * perms[j].inverse()).cycle_count());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
  const auto id = std::find(perms.begin(), perms.end(), Permutation::identity(n)) - perms.begin();
  e(id) = 1.0;
  return g.fullPivLu().solve(e);
}

}  // namespace

TEST_SUITE("weingarten") {

TEST_CASE("cycle counts") {
  CHECK(Permutation::identity(3).cycle_count() == 3);
  CHECK(Permutation::from_cycles(2, {{1, 2}}).cycle_count() == 1);
  CHECK(Permutation::from_cycles(3, {{1, 2, 3}}).cycle_count() == 1);
  CHECK(Permutation::from_one_based({2, 1, 3}).cycle_type().to_string() == "[2,1]");
  CHECK_THROWS_AS(Permutation::from_one_based({1, 1}), Error);
}

TEST_CASE("partitions and permutations") {
  CHECK(partitions(4).size() == 5);
  CHECK(partitions(6).size() == 11);
  CHECK(partitions(3).front().to_string() == "[3]");
  CHECK(partitions(3).back().to_string() == "[1,1,1]");
  CHECK(all_permutations(4).size() == 24);
  for (const auto& t : partitions(5)) CHECK(representative(t).cycle_type() == t);
}

TEST_CASE("n = 1: Wg = 1/N") {
  WeingartenTable table;
  for (int N = 1; N <= 9; ++N) {
    CHECK(table.exact(1, N, CycleType({1})) == Rational(1, N));
  }
}

TEST_CASE("n = 2: hand-inverted 2x2 Gram system") {
  // [[N^2, N], [N, N^2]] (a, b)^T = (1, 0)^T
  WeingartenTable table;
  for (int N = 2; N <= 8; ++N) {
    const Rational n2(N * N);
    const Rational a = n2 / (n2 * n2 - n2);
    const Rational b = Rational(-N) / (n2 * n2 - n2);
    CHECK(table.exact(2, N, CycleType({1, 1})) == a);
    CHECK(table.exact(2, N, CycleType({2})) == b);
    CHECK(a == Rational(1) / (n2 - 1));
    CHECK(b == Rational(-1) / (N * (n2 - 1)));
  }
  CHECK(table.exact(2, 2, CycleType({1, 1})) == Rational(1, 3));
  CHECK(table.exact(2, 2, CycleType({2})) == Rational(-1, 6));
}

TEST_CASE("agrees with numerical inversion of the full Gram matrix") {
  WeingartenTable table;
  for (int n = 1; n <= 4; ++n) {
    for (int N : {n, n + 1, 7}) {
      const auto col = gram_inverse_column(n, N);
      const auto perms = all_permutations(n);
      for (std::size_t i = 0; i < perms.size(); ++i) {
        // column at identity, row sigma: Wg(sigma)
        CHECK(table.value(n, N, perms[i]) ==
              doctest::Approx(col(static_cast<Eigen::Index>(i))).epsilon(1e-9).scale(1e-12));
      }
    }
  }
}

TEST_CASE("N < n is rejected") {
  WeingartenTable table;
  try {
    (void)table.exact(3, 2, CycleType({3}));
    FAIL("expected gram_singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::gram_singular);
  }
  CHECK_THROWS_AS(table.exact(7, 8, CycleType({7})), Error);  // beyond max_n
}

TEST_CASE("conjugation invariance") {
  std::mt19937_64 rng(11);
  WeingartenTable table;
  for (int n = 2; n <= 5; ++n) {
    auto images = Permutation::identity(n).images();
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(images.begin(), images.end(), rng);
      const Permutation sigma(images);
      std::shuffle(images.begin(), images.end(), rng);
      const Permutation pi(images);
      CHECK(table.value(n, 6, sigma) == table.value(n, 6, pi * sigma * pi.inverse()));
    }
  }
}

TEST_CASE("defining relation: Gram residual <= 1e-10 for n <= 6, N <= 12") {
  WeingartenTable table;
  for (int n = 1; n <= 6; ++n)
    for (int N = n; N <= 12; ++N) CHECK(gram_residual(table, n, N) <= 1e-10);
}

TEST_CASE("corrupted entries are caught by the Gram residual") {
  WeingartenTable table;
  CHECK(gram_residual(table, 3, 5) <= 1e-10);
  table.inject_fault_for_testing(3, 5, CycleType({3}), Rational(1, 1000));
  CHECK(gram_residual(table, 3, 5) > 1e-6);
}

TEST_CASE("asymptotic order: |Wg| N^{2n - #sigma} settles") {
  WeingartenTable table;
  for (int n = 1; n <= 4; ++n) {
    for (const auto& type : partitions(n)) {
      const int cycles = type.length();
      std::vector<double> seq;
      for (int N : {8, 16, 32, 64}) {
        seq.push_back(std::abs(to_double(table.exact(n, N, type))) *
                      std::pow(static_cast<double>(N), 2 * n - cycles));
      }
      CHECK(std::abs(seq[3] - seq[2]) <= 0.05 * std::abs(seq[3]));
      CHECK(seq[3] > 0.0);
    }
  }
}

TEST_CASE("haar_entry_moment") {
  for (int N : {1, 2, 5}) CHECK(haar_entry_moment({{1, 1}}, {{1, 1}}, N) == Rational(1, N));
  CHECK(haar_entry_moment({{1, 1}}, {{1, 2}}, 3) == 0);
  CHECK(haar_entry_moment({{1, 1}, {2, 2}}, {{1, 1}, {2, 2}}, 2) == Rational(1, 3));
  CHECK(haar_entry_moment({{1, 1}}, {}, 3) == 0);
  // E|u11|^4 = 2 / (N (N + 1))
  for (int N : {2, 3, 4}) {
    CHECK(haar_entry_moment({{1, 1}, {1, 1}}, {{1, 1}, {1, 1}}, N) == Rational(2) / (N * (N + 1)));
  }
  try {
    (void)haar_entry_moment({{3, 1}}, {{1, 1}}, 2);
    FAIL("expected index_out_of_range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::index_out_of_range);
  }
}

TEST_CASE("decimal rendering") {
  CHECK(to_decimal_string(Rational(1, 3)) == "3.3333333333333333e-01");
  CHECK(to_double(Rational(-1, 6)) == doctest::Approx(-1.0 / 6.0));
}

}  // TEST_SUITE
