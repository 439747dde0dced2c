#include <cmath>
#include <random>

#include "doctest.h"
#include "nchardy/error.hpp"
#include "nchardy/words.hpp"

using namespace nchardy;

namespace {

Matrix random_matrix(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

MatrixTuple random_tuple(int m, int n, std::mt19937_64& rng, double scale = 0.5) {
  std::vector<Matrix> mats;
  for (int k = 0; k < m; ++k) mats.push_back(random_matrix(n, rng, scale));
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

}  // namespace

TEST_SUITE("words") {

TEST_CASE("word basics and shortlex order") {
  const Word w{1, 2, 1};
  CHECK(w.size() == 3);
  CHECK(w.letter_counts(2) == std::vector<int>{2, 1});
  CHECK(Word{2} < Word{1, 1});
  CHECK(Word{1, 2} < Word{2, 1});
  CHECK(Word{}.empty());
  CHECK(Word{1}.concat(Word{2, 2}) == Word{1, 2, 2});
  CHECK(words_of_length(3, 2).size() == 9);
  CHECK(words_up_to(2, 3).size() == 15);
  CHECK_THROWS_AS(Word({0}), Error);
}

TEST_CASE("word_eval") {
  std::mt19937_64 rng(1);
  const auto x = random_tuple(2, 3, rng);
  CHECK(word_eval(x, Word{}).isApprox(Matrix::Identity(3, 3)));

  const MatrixTuple ids(2, {Matrix::Identity(2, 2), Matrix::Identity(2, 2)});
  CHECK(word_eval(ids, {1, 2, 1}) == Matrix::Identity(2, 2));

  CHECK(word_eval(scalars({2.0, 3.0}), {1, 2, 2})(0, 0) == Complex(18.0));

  try {
    (void)word_eval(x, {1, 3});
    FAIL("expected alphabet mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::alphabet_mismatch);
  }
}

TEST_CASE("word_eval is multiplicative under concatenation") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_tuple(3, 3, rng);
    const Word u{1, 3}, v{2, 2, 1};
    const Matrix lhs = word_eval(x, u.concat(v));
    const Matrix rhs = word_eval(x, u) * word_eval(x, v);
    CHECK((lhs - rhs).norm() <= 1e-13 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("series_eval") {
  NcSeries f(2);
  f.add({1}, 3.0);
  const MatrixTuple x(2, {Matrix::Identity(2, 2), Matrix::Zero(2, 2)});
  CHECK(series_eval(f, x) == 3.0 * Matrix::Identity(2, 2));

  std::mt19937_64 rng(3);
  const auto y = random_tuple(2, 3, rng);
  NcSeries g(2);
  g.add({1, 2}, 1.0).add({2, 1}, 1.0);
  CHECK(series_eval(g, y).isApprox(y[1] * y[2] + y[2] * y[1]));

  NcSeries h(2);
  for (const auto& w : words_up_to(2, 2)) h.add(w, 1.0);
  CHECK(std::abs(series_eval(h, scalars({0.1, 0.1}))(0, 0) - 1.24) < 1e-14);

  // scale r multiplies a length-l word by r^l
  CHECK(series_eval(g, y, 0.5).isApprox(0.25 * series_eval(g, y)));
}

TEST_CASE("canonical sparse form") {
  NcSeries f(2);
  f.add({1}, 1.0).add({1}, -1.0);
  CHECK(f.is_zero());
  CHECK(f.degree() == 0);
  f.set({2, 1}, 2.0);
  CHECK(f.degree() == 2);
  f.set({2, 1}, 0.0);
  CHECK(f == NcSeries(2));
  CHECK_THROWS_AS(f.add({3}, 1.0), Error);
}

TEST_CASE("l2p_norm") {
  CHECK(l2p_norm(NcSeries(2), 1.0) == 0.0);
  NcSeries f(2);
  f.add({1, 2}, 1.0).add({2, 1}, 1.0);
  CHECK(l2p_norm(f, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(l2p_norm(f, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(l2p_norm(f, 0.0), Error);
  CHECK_THROWS_AS(l2p_norm(f, -1.0), Error);

  std::mt19937_64 rng(4);
  const auto g = random_series(3, 2, rng);
  double direct = 0.0;
  for (const auto& [w, c] : g.terms()) direct += std::norm(c);
  CHECK(l2p_norm(g, 1.0) * l2p_norm(g, 1.0) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(to_l2p(g, 1.0).norm == l2p_norm(g, 1.0));
}

TEST_CASE("series_eval_tail_bounded") {
  const auto x = scalars({0.5});
  auto zero = series_eval_tail_bounded([](const Word&) { return Complex{}; }, 0.0, x, 1.0, 10);
  CHECK(zero.value.norm() == 0.0);
  CHECK(zero.tail_bound == 0.0);

  // f_w = 1 for every word, m = 1. With p = 2, ||f||_{2,2} = sqrt(2) and theta = 0.5.
  const auto ones = [](const Word&) { return Complex(1.0); };
  double previous_bound = 1e300;
  for (int L : {5, 10, 20, 40}) {
    const auto tb = series_eval_tail_bounded(ones, std::sqrt(2.0), x, 2.0, L);
    const double partial = tb.value(0, 0).real();
    CHECK(partial == doctest::Approx(2.0 - std::pow(0.5, L)).epsilon(1e-14));
    CHECK(2.0 - partial <= tb.tail_bound + 1e-15);  // bound holds against the true tail
    CHECK(tb.tail_bound < previous_bound);
    previous_bound = tb.tail_bound;
  }
  CHECK(previous_bound < 1e-5);

  // theta = 0.25, ||f|| = 1, L = 10: 0.25^{5.5} / (1 - 0.5)
  const auto y = scalars({0.5});
  const auto tb = series_eval_tail_bounded(ones, 1.0, y, 1.0, 10);
  CHECK(tb.theta == doctest::Approx(0.25));
  CHECK(tb.tail_bound == doctest::Approx(std::pow(0.25, 5.5) / 0.5).epsilon(1e-12));
  CHECK(tb.tail_bound == doctest::Approx(9.8e-4).epsilon(0.01));

  try {
    (void)series_eval_tail_bounded(ones, 1.0, scalars({1.0}), 1.0, 5);
    FAIL("expected inconclusive tail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::inconclusive_tail);
  }
}

TEST_CASE("tail bound against brute-force partial sums, m = 2") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto x = random_tuple(2, 2, rng);
    const double scale = std::sqrt(0.3 / column_contraction(x, 1.0));
    std::vector<Matrix> mats{x[1] * scale, x[2] * scale};
    const MatrixTuple y(2, mats);
    // f_w = 2^{-|w|/2} has ||f||_{2,1}^2 = sum_l 2^l 2^{-l} ... use 3^{-|w|/2}: sum (2/3)^l = 3
    const auto coef = [](const Word& w) { return Complex(std::pow(3.0, -0.5 * w.size())); };
    const auto far = series_eval_tail_bounded(coef, std::sqrt(3.0), y, 1.0, 18);
    const auto near = series_eval_tail_bounded(coef, std::sqrt(3.0), y, 1.0, 6);
    const double tail = Eigen::JacobiSVD<Matrix>(far.value - near.value).singularValues()(0);
    CHECK(tail <= near.tail_bound);
  }
}

TEST_CASE("direct_sum") {
  const auto ds = direct_sum(scalars({2.0}), scalars({3.0}));
  CHECK(ds.dim() == 2);
  CHECK(ds[1] == Matrix(Eigen::Vector2cd(2.0, 3.0).asDiagonal()));

  std::mt19937_64 rng(6);
  const auto x = random_tuple(2, 2, rng);
  const auto y = random_tuple(2, 2, rng);
  CHECK(direct_sum(x, MatrixTuple::zero(2, 0))[1] == x[1]);
  const Word w{1, 2};
  CHECK(word_eval(direct_sum(x, y), w).isApprox(block_diag(word_eval(x, w), word_eval(y, w))));
  CHECK_THROWS_AS(direct_sum(x, random_tuple(3, 2, rng)), Error);
}

TEST_CASE("direct sums respected by every polynomial (1e-12)") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 3;
    const auto f = random_series(m, 3, rng);
    const auto x = random_tuple(m, 1 + trial % 3, rng);
    const auto y = random_tuple(m, 1 + (trial / 3) % 4, rng);
    const Matrix lhs = series_eval(f, direct_sum(x, y));
    const Matrix rhs = block_diag(series_eval(f, x), series_eval(f, y));
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
  }
}

TEST_CASE("similarity") {
  std::mt19937_64 rng(8);
  const auto x = random_tuple(2, 3, rng);
  const auto same = similarity(x, Matrix::Identity(3, 3));
  CHECK(same.tuple[1].isApprox(x[1]));
  CHECK(same.condition_number == doctest::Approx(1.0));
  const auto scaled = similarity(x, 2.0 * Matrix::Identity(3, 3));
  CHECK(scaled.tuple[2].isApprox(x[2]));

  Matrix singular = Matrix::Zero(3, 3);
  singular(0, 0) = 1.0;
  try {
    (void)similarity(x, singular);
    FAIL("expected singular matrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_matrix);
  }
}

TEST_CASE("similarities respected by every polynomial (cond <= 1e3, 1e-9)") {
  std::mt19937_64 rng(9);
  int tested = 0;
  while (tested < 50) {
    const int m = 1 + tested % 3;
    const int n = 1 + tested % 4;
    const auto f = random_series(m, 3, rng);
    const auto x = random_tuple(m, n, rng);
    const Matrix t = random_matrix(n, rng);
    const auto sim = similarity(x, t);
    if (sim.condition_number > 1e3) continue;
    ++tested;
    const Matrix lhs = series_eval(f, sim.tuple);
    const Matrix rhs = t * series_eval(f, x) * t.inverse();
    CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());
  }
}

TEST_CASE("column contraction") {
  const MatrixTuple x(2, {0.5 * Matrix::Identity(2, 2), 0.5 * Matrix::Identity(2, 2)});
  CHECK(column_contraction(x, 1.0) == doctest::Approx(0.5));
  CHECK(column_contraction(x, 2.0) == doctest::Approx(1.0));
}

}  // TEST_SUITE
