#include "nchardy/weingarten.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

#include "nchardy/error.hpp"

namespace nchardy {

std::string to_decimal_string(const Rational& q, int significant_digits) {
  mpf_class f(q, 512);
  std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 64);
  gmp_snprintf(buf.data(), buf.size(), "%.*Fe", significant_digits - 1, f.get_mpf_t());
  return buf.data();
}

// mpq get_d truncates; going through 40 decimal digits rounds to nearest.
double to_double(const Rational& q) {
  if (q == 0) return 0.0;
  return std::strtod(to_decimal_string(q, 40).c_str(), nullptr);
}

const char* to_string(Geometry g) noexcept {
  switch (g) {
    case Geometry::polydisc: return "polydisc";
    case Geometry::ball_column: return "ball";
    case Geometry::ball_row: return "ball-row";
  }
  return "?";
}

// ---------------------------------------------------------------------------

std::size_t WeingartenTable::Entry::index_of(const CycleType& t) const {
  for (std::size_t i = 0; i < types.size(); ++i)
    if (types[i] == t) return i;
  throw Error(ErrorCode::invalid_argument,
              "cycle type " + t.to_string() + " is not a partition of " + std::to_string(n));
}

namespace {

// count[lambda][mu][c] = #{tau in class mu : #(sigma_lambda tau^{-1}) = c}.
using ClassCounts = std::vector<std::vector<std::vector<std::int64_t>>>;

ClassCounts class_counts(int n, const std::vector<CycleType>& types) {
  const auto perms = all_permutations(n);
  std::vector<std::size_t> type_of(perms.size());
  for (std::size_t i = 0; i < perms.size(); ++i) {
    const auto t = perms[i].cycle_type();
    for (std::size_t k = 0; k < types.size(); ++k)
      if (types[k] == t) type_of[i] = k;
  }
  ClassCounts counts(types.size(),
                     std::vector<std::vector<std::int64_t>>(
                         types.size(), std::vector<std::int64_t>(n + 1, 0)));
  for (std::size_t l = 0; l < types.size(); ++l) {
    const auto sigma = representative(types[l]);
    for (std::size_t i = 0; i < perms.size(); ++i) {
      const int c = (sigma * perms[i].inverse()).cycle_count();
      ++counts[l][type_of[i]][c];
    }
  }
  return counts;
}

std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a,
                                  std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) {
      throw Error(ErrorCode::gram_singular, "class-reduced Gram system is singular");
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

std::shared_ptr<WeingartenTable::Entry> compute_entry(int n, int dim) {
  auto entry = std::make_shared<WeingartenTable::Entry>();
  entry->n = n;
  entry->dim = dim;
  entry->types = partitions(n);
  const auto counts = class_counts(n, entry->types);
  const std::size_t p = entry->types.size();

  std::vector<mpz_class> powers(static_cast<std::size_t>(n) + 1);
  powers[0] = 1;
  for (int c = 1; c <= n; ++c) powers[c] = powers[c - 1] * dim;

  std::vector<std::vector<Rational>> a(p, std::vector<Rational>(p, 0));
  for (std::size_t l = 0; l < p; ++l)
    for (std::size_t mu = 0; mu < p; ++mu)
      for (int c = 1; c <= n; ++c)
        if (counts[l][mu][c]) a[l][mu] += powers[c] * mpz_class(static_cast<long>(counts[l][mu][c]));

  // Identity has cycle type [1,...,1], the last partition.
  std::vector<Rational> rhs(p, 0);
  rhs[p - 1] = 1;
  entry->exact = solve_exact(std::move(a), std::move(rhs));
  entry->approx.reserve(p);
  for (const auto& q : entry->exact) entry->approx.push_back(to_double(q));
  return entry;
}

}  // namespace

WeingartenTable::WeingartenTable(int max_n) : max_n_(max_n) {
  if (max_n < 1 || max_n > 8) {
    throw Error(ErrorCode::invalid_argument, "max_n must lie in [1..8]");
  }
}

std::shared_ptr<const WeingartenTable::Entry> WeingartenTable::entry(int n, int dim) const {
  if (n < 1 || n > max_n_) {
    throw Error(ErrorCode::unsupported_multiplicity,
                "Weingarten order n = " + std::to_string(n) + " outside [1.." +
                    std::to_string(max_n_) + "]");
  }
  if (dim < n) {
    throw Error(ErrorCode::gram_singular,
                "Gram matrix on S_" + std::to_string(n) + " is singular for N = " +
                    std::to_string(dim) + " < n");
  }
  const auto key = std::make_pair(n, dim);
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto computed = compute_entry(n, dim);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.try_emplace(key, std::move(computed));
  return it->second;
}

Rational WeingartenTable::exact(int n, int dim, const CycleType& type) const {
  const auto e = entry(n, dim);
  return e->exact[e->index_of(type)];
}

double WeingartenTable::value(int n, int dim, const Permutation& sigma) const {
  if (sigma.size() != n) {
    throw Error(ErrorCode::invalid_argument, "permutation is not in S_" + std::to_string(n));
  }
  const auto e = entry(n, dim);
  return e->approx[e->index_of(sigma.cycle_type())];
}

void WeingartenTable::inject_fault_for_testing(int n, int dim, const CycleType& type,
                                               const Rational& delta) {
  auto original = entry(n, dim);
  auto copy = std::make_shared<Entry>(*original);
  const auto i = copy->index_of(type);
  copy->exact[i] += delta;
  copy->approx[i] = to_double(copy->exact[i]);
  std::unique_lock lock(mutex_);
  cache_[{n, dim}] = std::move(copy);
}

WeingartenTable& default_weingarten_table() {
  static WeingartenTable table;
  return table;
}

double weingarten(int n, int dim, const Permutation& sigma) {
  return default_weingarten_table().value(n, dim, sigma);
}

Rational weingarten_exact(int n, int dim, const Permutation& sigma,
                          const WeingartenTable& table) {
  if (sigma.size() != n) {
    throw Error(ErrorCode::invalid_argument, "permutation is not in S_" + std::to_string(n));
  }
  return table.exact(n, dim, sigma.cycle_type());
}

double gram_residual(const WeingartenTable& table, int n, int dim) {
  const auto e = table.entry(n, dim);
  const auto perms = all_permutations(n);
  std::vector<long double> wg(perms.size());
  std::vector<Permutation> inverses;
  inverses.reserve(perms.size());
  for (std::size_t i = 0; i < perms.size(); ++i) {
    wg[i] = static_cast<long double>(e->approx[e->index_of(perms[i].cycle_type())]);
    inverses.push_back(perms[i].inverse());
  }
  std::vector<long double> powers(static_cast<std::size_t>(n) + 1, 1.0L);
  for (int c = 1; c <= n; ++c) powers[c] = powers[c - 1] * dim;

  const auto id = Permutation::identity(n);
  long double worst = 0.0L;
  for (const auto& sigma : perms) {
    long double acc = sigma == id ? -1.0L : 0.0L;
    for (std::size_t j = 0; j < perms.size(); ++j) {
      acc += powers[(sigma * inverses[j]).cycle_count()] * wg[j];
    }
    worst = std::max(worst, std::fabs(acc));
  }
  return static_cast<double>(worst);
}

Rational haar_entry_moment(const std::vector<EntryIndex>& ups,
                           const std::vector<EntryIndex>& conjs, int dim,
                           const WeingartenTable& table) {
  auto check = [dim](const EntryIndex& e) {
    if (e.row < 1 || e.row > dim || e.col < 1 || e.col > dim) {
      throw Error(ErrorCode::index_out_of_range,
                  "entry index (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                      ") outside [1.." + std::to_string(dim) + "]");
    }
  };
  for (const auto& e : ups) check(e);
  for (const auto& e : conjs) check(e);
  if (ups.size() != conjs.size()) return 0;
  const int n = static_cast<int>(ups.size());
  if (n == 0) return 1;
  const auto e = table.entry(n, dim);
  const auto perms = all_permutations(n);

  auto matches = [&](const Permutation& p, bool rows) {
    for (int k = 0; k < n; ++k) {
      const auto& a = ups[k];
      const auto& b = conjs[p(k)];
      if (rows ? a.row != b.row : a.col != b.col) return false;
    }
    return true;
  };
  std::vector<const Permutation*> sigmas;
  std::vector<const Permutation*> taus;
  for (const auto& p : perms) {
    if (matches(p, true)) sigmas.push_back(&p);
    if (matches(p, false)) taus.push_back(&p);
  }
  Rational total = 0;
  for (const auto* sigma : sigmas) {
    const auto sigma_inv = sigma->inverse();
    for (const auto* tau : taus) {
      total += e->exact[e->index_of((*tau * sigma_inv).cycle_type())];
    }
  }
  return total;
}

}  // namespace nchardy
