#pragma once

// Free-monoid words, sparse noncommutative series with scalar coefficients,
// and their evaluation at tuples of square matrices.

#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nchardy {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// A word w = w_1 ... w_l over the alphabet {1..m}. Letters are 1-based; the
/// alphabet size lives with the enclosing series or tuple.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters);
  explicit Word(std::span<const int> letters);

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  int operator[](std::size_t i) const noexcept { return letters_[i]; }
  int max_letter() const noexcept;

  const std::vector<std::uint8_t>& letters() const noexcept { return letters_; }
  std::vector<int> to_vector() const;

  /// Number of occurrences of each letter 1..m (index 0 is letter 1).
  std::vector<int> letter_counts(int m) const;

  Word concat(const Word& other) const;
  Word appended(int letter) const;

  /// Shortlex: shorter words first, then lexicographic.
  friend bool operator<(const Word& a, const Word& b) noexcept;
  friend bool operator==(const Word& a, const Word& b) noexcept = default;

 private:
  std::vector<std::uint8_t> letters_;
};

/// All words of length exactly `length` over {1..m}, in shortlex order.
std::vector<Word> words_of_length(int m, int length);

/// All words of length <= max_length over {1..m}, in shortlex order.
std::vector<Word> words_up_to(int m, int max_length);

/// m complex n x n matrices, a point of (C^m)_nc at level n.
class MatrixTuple {
 public:
  MatrixTuple(int m, int n);
  explicit MatrixTuple(std::vector<Matrix> matrices);
  MatrixTuple(int m, std::vector<Matrix> matrices);

  int alphabet() const noexcept { return m_; }
  int dim() const noexcept { return n_; }
  const Matrix& operator[](int letter) const { return mats_.at(letter - 1); }
  Matrix& operator[](int letter) { return mats_.at(letter - 1); }
  const std::vector<Matrix>& matrices() const noexcept { return mats_; }

  static MatrixTuple zero(int m, int n);

 private:
  void validate();

  int m_;
  int n_;
  std::vector<Matrix> mats_;
};

/// Finitely supported series f = sum_w f_w X^w. Zero coefficients are never
/// stored, so two series are equal iff their maps are equal.
class NcSeries {
 public:
  using Terms = std::map<Word, Complex>;

  explicit NcSeries(int m);

  int alphabet() const noexcept { return m_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int degree() const noexcept;

  /// Adds c to the coefficient of w; drops the entry if it becomes zero.
  NcSeries& add(const Word& w, Complex c);
  NcSeries& set(const Word& w, Complex c);
  Complex coefficient(const Word& w) const;

  static NcSeries monomial(int m, const Word& w, Complex c = 1.0);

  friend bool operator==(const NcSeries&, const NcSeries&) = default;

 private:
  void check_word(const Word& w) const;

  int m_;
  Terms terms_;
};

/// Coefficient source for series with possibly infinite support.
using CoefficientSource = std::function<Complex(const Word&)>;

/// A series viewed as an element of l^2_p(F_m).
struct L2pVector {
  double p = 1.0;
  NcSeries::Terms coeffs;
  double norm = 0.0;
};

/// X^w = X_{w_1} ... X_{w_l}; identity for the empty word.
Matrix word_eval(const MatrixTuple& x, const Word& w);

/// sum_w f_w (r X)^w, an exact finite sum.
Matrix series_eval(const NcSeries& f, const MatrixTuple& x, double r = 1.0);

struct TailBoundedValue {
  Matrix value;
  double tail_bound = 0.0;
  double theta = 0.0;
};

/// Largest eigenvalue of p * sum_i X_i^* X_i.
double column_contraction(const MatrixTuple& x, double p);

/// Degree-<=L partial sum of an infinite series together with an operator-norm
/// bound on the omitted tail, valid when theta = lambda_max(p sum X_i^* X_i) < 1.
/// Each degree-l stratum is bounded by ||f||_{2,p} theta^{l/2} (Cauchy-Schwarz
/// against sum_{|w|=l} p^l (X^w)^* X^w <= theta^l), which sums to
/// ||f||_{2,p} theta^{(L+1)/2} / (1 - theta^{1/2}).
TailBoundedValue series_eval_tail_bounded(const CoefficientSource& f,
                                          double l2p_norm_of_f,
                                          const MatrixTuple& x, double p,
                                          int max_degree);

double l2p_norm(const NcSeries& f, double p);
L2pVector to_l2p(const NcSeries& f, double p);

/// Componentwise block-diagonal sum.
MatrixTuple direct_sum(const MatrixTuple& x, const MatrixTuple& y);

struct SimilarityResult {
  MatrixTuple tuple;
  double condition_number;
};

/// (T X_1 T^{-1}, ..., T X_m T^{-1}).
SimilarityResult similarity(const MatrixTuple& x, const Matrix& t);

Matrix block_diag(const Matrix& a, const Matrix& b);

}  // namespace nchardy
