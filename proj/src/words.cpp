#include "nchardy/words.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nchardy/error.hpp"

namespace nchardy {

namespace {

void check_letter(int letter) {
  if (letter < 1 || letter > 255) {
    throw Error(ErrorCode::alphabet_mismatch,
                "word letter " + std::to_string(letter) + " outside [1..255]");
  }
}

void check_alphabet(const MatrixTuple& x, const Word& w) {
  if (w.max_letter() > x.alphabet()) {
    throw Error(ErrorCode::alphabet_mismatch,
                "word uses letter " + std::to_string(w.max_letter()) +
                    " but the tuple has m = " + std::to_string(x.alphabet()));
  }
}

}  // namespace

Word::Word(std::initializer_list<int> letters) {
  letters_.reserve(letters.size());
  for (int l : letters) {
    check_letter(l);
    letters_.push_back(static_cast<std::uint8_t>(l));
  }
}

Word::Word(std::span<const int> letters) {
  letters_.reserve(letters.size());
  for (int l : letters) {
    check_letter(l);
    letters_.push_back(static_cast<std::uint8_t>(l));
  }
}

int Word::max_letter() const noexcept {
  int best = 0;
  for (auto l : letters_) best = std::max(best, static_cast<int>(l));
  return best;
}

std::vector<int> Word::to_vector() const {
  return {letters_.begin(), letters_.end()};
}

std::vector<int> Word::letter_counts(int m) const {
  std::vector<int> counts(static_cast<std::size_t>(std::max(m, max_letter())), 0);
  for (auto l : letters_) ++counts[l - 1];
  return counts;
}

Word Word::concat(const Word& other) const {
  Word out = *this;
  out.letters_.insert(out.letters_.end(), other.letters_.begin(),
                      other.letters_.end());
  return out;
}

Word Word::appended(int letter) const {
  check_letter(letter);
  Word out = *this;
  out.letters_.push_back(static_cast<std::uint8_t>(letter));
  return out;
}

bool operator<(const Word& a, const Word& b) noexcept {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.letters_ < b.letters_;
}

std::vector<Word> words_of_length(int m, int length) {
  std::vector<Word> out{Word{}};
  for (int l = 0; l < length; ++l) {
    std::vector<Word> next;
    next.reserve(out.size() * static_cast<std::size_t>(m));
    for (const auto& w : out)
      for (int k = 1; k <= m; ++k) next.push_back(w.appended(k));
    out = std::move(next);
  }
  return out;
}

std::vector<Word> words_up_to(int m, int max_length) {
  std::vector<Word> out;
  for (int l = 0; l <= max_length; ++l) {
    auto layer = words_of_length(m, l);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

// ---------------------------------------------------------------------------

MatrixTuple::MatrixTuple(int m, int n) : m_(m), n_(n) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "alphabet size must be >= 1");
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative matrix dimension");
  mats_.assign(static_cast<std::size_t>(m), Matrix::Zero(n, n));
}

MatrixTuple::MatrixTuple(std::vector<Matrix> matrices)
    : m_(static_cast<int>(matrices.size())), n_(0), mats_(std::move(matrices)) {
  validate();
}

MatrixTuple::MatrixTuple(int m, std::vector<Matrix> matrices)
    : m_(m), n_(0), mats_(std::move(matrices)) {
  validate();
}

void MatrixTuple::validate() {
  if (m_ < 1 || static_cast<int>(mats_.size()) != m_) {
    throw Error(ErrorCode::invalid_argument,
                "matrix tuple needs exactly m >= 1 matrices");
  }
  n_ = static_cast<int>(mats_.front().rows());
  for (const auto& a : mats_) {
    if (a.rows() != n_ || a.cols() != n_) {
      throw Error(ErrorCode::dimension_mismatch,
                  "all matrices of a tuple must be square of equal size");
    }
  }
}

MatrixTuple MatrixTuple::zero(int m, int n) { return MatrixTuple(m, n); }

// ---------------------------------------------------------------------------

NcSeries::NcSeries(int m) : m_(m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "alphabet size must be >= 1");
}

int NcSeries::degree() const noexcept {
  return terms_.empty() ? 0 : static_cast<int>(terms_.rbegin()->first.size());
}

void NcSeries::check_word(const Word& w) const {
  if (w.max_letter() > m_) {
    throw Error(ErrorCode::alphabet_mismatch,
                "word letter " + std::to_string(w.max_letter()) +
                    " exceeds alphabet size " + std::to_string(m_));
  }
}

NcSeries& NcSeries::add(const Word& w, Complex c) {
  check_word(w);
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) it->second += c;
  if (it->second == Complex{}) terms_.erase(it);
  return *this;
}

NcSeries& NcSeries::set(const Word& w, Complex c) {
  check_word(w);
  if (c == Complex{})
    terms_.erase(w);
  else
    terms_[w] = c;
  return *this;
}

Complex NcSeries::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Complex{} : it->second;
}

NcSeries NcSeries::monomial(int m, const Word& w, Complex c) {
  NcSeries f(m);
  f.set(w, c);
  return f;
}

// ---------------------------------------------------------------------------

Matrix word_eval(const MatrixTuple& x, const Word& w) {
  check_alphabet(x, w);
  if (w.empty()) return Matrix::Identity(x.dim(), x.dim());
  Matrix out = x[w[0]];
  for (std::size_t i = 1; i < w.size(); ++i) out = out * x[w[i]];
  return out;
}

Matrix series_eval(const NcSeries& f, const MatrixTuple& x, double r) {
  if (f.alphabet() != x.alphabet()) {
    throw Error(ErrorCode::alphabet_mismatch,
                "series alphabet " + std::to_string(f.alphabet()) +
                    " differs from tuple alphabet " +
                    std::to_string(x.alphabet()));
  }
  Matrix out = Matrix::Zero(x.dim(), x.dim());
  for (const auto& [w, c] : f.terms()) {
    out += (c * std::pow(r, static_cast<double>(w.size()))) * word_eval(x, w);
  }
  return out;
}

double column_contraction(const MatrixTuple& x, double p) {
  if (x.dim() == 0) return 0.0;
  Matrix s = Matrix::Zero(x.dim(), x.dim());
  for (const auto& a : x.matrices()) s += a.adjoint() * a;
  s *= p;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

namespace {

void accumulate_words(const CoefficientSource& f, const MatrixTuple& x,
                      const Word& prefix, const Matrix& prefix_value,
                      int remaining, Matrix& acc) {
  acc += f(prefix) * prefix_value;
  if (remaining == 0) return;
  for (int k = 1; k <= x.alphabet(); ++k) {
    accumulate_words(f, x, prefix.appended(k), prefix_value * x[k],
                     remaining - 1, acc);
  }
}

}  // namespace

TailBoundedValue series_eval_tail_bounded(const CoefficientSource& f,
                                          double l2p_norm_of_f,
                                          const MatrixTuple& x, double p,
                                          int max_degree) {
  if (p <= 0.0) throw Error(ErrorCode::domain, "weight p must be positive");
  if (max_degree < 0) throw Error(ErrorCode::domain, "negative truncation degree");
  if (l2p_norm_of_f < 0.0) throw Error(ErrorCode::domain, "negative l2p norm");

  TailBoundedValue out;
  out.theta = column_contraction(x, p);
  if (!(out.theta < 1.0)) {
    throw Error(ErrorCode::inconclusive_tail,
                "lambda_max(p sum X_i^* X_i) = " + std::to_string(out.theta) +
                    " >= 1; no tail bound available");
  }
  out.value = Matrix::Zero(x.dim(), x.dim());
  if (l2p_norm_of_f == 0.0) return out;

  accumulate_words(f, x, Word{}, Matrix::Identity(x.dim(), x.dim()), max_degree,
                   out.value);
  const double root = std::sqrt(out.theta);
  out.tail_bound = l2p_norm_of_f *
                   std::pow(out.theta, 0.5 * (max_degree + 1)) / (1.0 - root);
  return out;
}

double l2p_norm(const NcSeries& f, double p) {
  if (p <= 0.0) throw Error(ErrorCode::domain, "weight p must be positive");
  double sum = 0.0;
  for (const auto& [w, c] : f.terms()) {
    sum += std::norm(c) * std::pow(p, -static_cast<double>(w.size()));
  }
  return std::sqrt(sum);
}

L2pVector to_l2p(const NcSeries& f, double p) {
  return L2pVector{p, f.terms(), l2p_norm(f, p)};
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

MatrixTuple direct_sum(const MatrixTuple& x, const MatrixTuple& y) {
  if (x.alphabet() != y.alphabet()) {
    throw Error(ErrorCode::alphabet_mismatch,
                "direct sum of tuples with different alphabet sizes");
  }
  MatrixTuple out(x.alphabet(), x.dim() + y.dim());
  for (int k = 1; k <= x.alphabet(); ++k) out[k] = block_diag(x[k], y[k]);
  return out;
}

SimilarityResult similarity(const MatrixTuple& x, const Matrix& t) {
  if (t.rows() != x.dim() || t.cols() != x.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "similarity matrix must match the tuple dimension");
  }
  Eigen::JacobiSVD<Matrix> svd(t);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 1.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 1.0;
  if (!(smin > smax * 1e-14)) {
    throw Error(ErrorCode::singular_matrix,
                "similarity matrix is singular to working precision");
  }
  const Matrix t_inv = t.partialPivLu().inverse();
  MatrixTuple out(x.alphabet(), x.dim());
  for (int k = 1; k <= x.alphabet(); ++k) out[k] = t * x[k] * t_inv;
  return {std::move(out), smax / smin};
}

}  // namespace nchardy
