#pragma once

// Exact integration of polynomials in the entries of Haar unitaries.
//
// Weingarten values are rational functions of N, so everything here is carried
// in exact rational arithmetic and only converted to floating point at the
// boundary of the module.

#include <map>
#include <memory>
#include <shared_mutex>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "nchardy/permutation.hpp"
#include "nchardy/words.hpp"

namespace nchardy {

using Rational = mpq_class;

inline constexpr int kDefaultMaxN = 6;

double to_double(const Rational& q);
std::string to_decimal_string(const Rational& q, int significant_digits = 17);

/// Cache of Wg(N, sigma) keyed by (n, N, cycle type of sigma).
///
/// Wg(N, .) is the class function solving G * wg = e_id, where
/// G(sigma, tau) = N^{#(sigma tau^{-1})} on S_n. Since G commutes with
/// conjugation the system is solved on class indicators, which is a
/// p(n) x p(n) rational system instead of n! x n!. Only N >= n is supported;
/// for N < n the Gram matrix is singular.
///
/// Thread safety: concurrent readers, one writer at a time.
class WeingartenTable {
 public:
  struct Entry {
    int n = 0;
    int dim = 0;
    std::vector<CycleType> types;  // partitions(n)
    std::vector<Rational> exact;   // parallel to types
    std::vector<double> approx;

    std::size_t index_of(const CycleType& t) const;
  };

  explicit WeingartenTable(int max_n = kDefaultMaxN);

  int max_n() const noexcept { return max_n_; }

  std::shared_ptr<const Entry> entry(int n, int dim) const;

  Rational exact(int n, int dim, const CycleType& type) const;
  double value(int n, int dim, const Permutation& sigma) const;

  /// Perturbs a cached value. Only for negative-control tests of the
  /// verification suite.
  void inject_fault_for_testing(int n, int dim, const CycleType& type,
                                const Rational& delta);

 private:
  int max_n_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const Entry>> cache_;
};

/// Process-wide table used when no table is passed explicitly.
WeingartenTable& default_weingarten_table();

/// Wg(N, sigma) for sigma in S_n.
double weingarten(int n, int dim, const Permutation& sigma);
Rational weingarten_exact(int n, int dim, const Permutation& sigma,
                          const WeingartenTable& table = default_weingarten_table());

/// max_sigma |sum_tau N^{#(sigma tau^{-1})} Wg(tau) - delta_{sigma,id}|, using
/// the table's cached values and the full n! x n! Gram matrix.
double gram_residual(const WeingartenTable& table, int n, int dim);

/// 1-based (row, column) index of a unitary entry.
struct EntryIndex {
  int row;
  int col;
};

/// E[ u_{i_1 j_1} ... u_{i_n j_n} conj(u_{i'_1 j'_1}) ... conj(u_{i'_n' j'_n'}) ]
/// over Haar U(N). Exactly zero when n != n'.
Rational haar_entry_moment(const std::vector<EntryIndex>& ups,
                           const std::vector<EntryIndex>& conjs, int dim,
                           const WeingartenTable& table = default_weingarten_table());

enum class Geometry { polydisc, ball_column, ball_row };

/// Distinguished boundary with its invariant probability measure:
/// polydisc   -> U(N)^m with the product Haar measure;
/// ball_column-> the N x N blocks of the first block column of U in U(mN);
/// ball_row   -> the N x N blocks of the first block row of U in U(mN).
struct BoundaryKind {
  Geometry geometry = Geometry::polydisc;
  int m = 1;

  static BoundaryKind polydisc(int m) { return {Geometry::polydisc, m}; }
  static BoundaryKind ball_column(int m) { return {Geometry::ball_column, m}; }
  static BoundaryKind ball_row(int m) { return {Geometry::ball_row, m}; }

  bool is_ball() const noexcept { return geometry != Geometry::polydisc; }
  friend bool operator==(const BoundaryKind&, const BoundaryKind&) = default;
};

const char* to_string(Geometry g) noexcept;

/// Exact value of  int Tr((X^w)^* X^v) d omega_N  over the given boundary.
///
/// The trace is expanded into a closed chain of unitary entries. For each
/// independent unitary the Weingarten sum runs over permutation pairs; the
/// delta constraints merge chain indices into classes, each contributing a
/// factor N. On the ball all blocks live in a single U(mN); a delta between
/// entries sitting in different blocks kills the term.
Rational pairing_moment_exact(const Word& w, const Word& v, BoundaryKind kind,
                              int N,
                              const WeingartenTable& table = default_weingarten_table());

/// int (1/N) Tr(g(rX)^* f(rX)) d omega_N, expanded bilinearly over word pairs.
Complex sesquilinear_moment_exact(const NcSeries& f, const NcSeries& g, double r,
                                  BoundaryKind kind, int N,
                                  const WeingartenTable& table = default_weingarten_table());

/// Memoizes pairing_moment_exact for one (kind, N).
class PairingCache {
 public:
  PairingCache(BoundaryKind kind, int N,
               const WeingartenTable& table = default_weingarten_table());
  const Rational& get(const Word& w, const Word& v);

 private:
  BoundaryKind kind_;
  int n_;
  const WeingartenTable* table_;
  std::map<std::pair<Word, Word>, Rational> values_;
};

}  // namespace nchardy
