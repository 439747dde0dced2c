#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "nchardy/error.hpp"
#include "nchardy/weingarten.hpp"

namespace nchardy {

namespace {

// Entry of a Haar unitary appearing in the expanded trace. Row and column are
// each an (offset block, chain variable) pair; the chain variable ranges over
// one block of size N.
struct ChainEntry {
  int row_block;
  int row_var;
  int col_block;
  int col_var;
};

struct Group {
  std::vector<ChainEntry> ups;
  std::vector<ChainEntry> conjs;
};

// For one group and one permutation: the variable identifications it forces,
// or nothing if some identified pair sits in different blocks.
struct Matching {
  const Permutation* perm;
  std::vector<std::pair<int, int>> merges;
};

std::vector<Matching> matchings(const Group& g, const std::vector<Permutation>& perms,
                                bool rows) {
  std::vector<Matching> out;
  const int n = static_cast<int>(g.ups.size());
  for (const auto& p : perms) {
    Matching m{&p, {}};
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      const auto& a = g.ups[k];
      const auto& b = g.conjs[p(k)];
      if (rows) {
        ok = a.row_block == b.row_block;
        m.merges.emplace_back(a.row_var, b.row_var);
      } else {
        ok = a.col_block == b.col_block;
        m.merges.emplace_back(a.col_var, b.col_var);
      }
    }
    if (ok) out.push_back(std::move(m));
  }
  return out;
}

struct UnionFind {
  std::array<int, 64> parent{};
  int components = 0;

  explicit UnionFind(int n) : components(n) {
    std::iota(parent.begin(), parent.begin() + n, 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
};

constexpr std::uint64_t kMaxTerms = 400'000'000;

struct GroupPlan {
  std::vector<Matching> sigmas;
  std::vector<Matching> taus;
  std::vector<std::vector<std::size_t>> type_index;  // [sigma][tau] -> Wg class
  std::shared_ptr<const WeingartenTable::Entry> wg;
};

}  // namespace

Rational pairing_moment_exact(const Word& w, const Word& v, BoundaryKind kind, int N,
                              const WeingartenTable& table) {
  if (kind.m < 1) throw Error(ErrorCode::invalid_argument, "alphabet size must be >= 1");
  if (N < 1) throw Error(ErrorCode::domain, "matrix level N must be >= 1");
  if (w.max_letter() > kind.m || v.max_letter() > kind.m) {
    throw Error(ErrorCode::alphabet_mismatch,
                "word letters exceed the boundary alphabet m = " + std::to_string(kind.m));
  }
  // Unbalanced letters (or lengths) vanish identically; no Weingarten work.
  if (w.size() != v.size()) return 0;
  if (kind.geometry == Geometry::polydisc && w.letter_counts(kind.m) != v.letter_counts(kind.m))
    return 0;
  const int length = static_cast<int>(w.size() + v.size());
  if (length == 0) return N;
  if (length > 64) {
    throw Error(ErrorCode::unsupported_multiplicity, "word pair too long for the exact engine");
  }

  // Chain: X_{w_t}^* ... X_{w_1}^* X_{v_1} ... X_{v_s}; factor q maps chain
  // variable q+1 to q (entry [q, q+1], cyclically).
  const int groups = kind.geometry == Geometry::polydisc ? kind.m : 1;
  std::vector<Group> plan_groups(static_cast<std::size_t>(groups));
  auto place = [&](int letter, int left, int right, bool star) {
    const int a = star ? right : left;  // X^*[left,right] = conj(X[right,left])
    const int b = star ? left : right;
    ChainEntry e{};
    int group = 0;
    switch (kind.geometry) {
      case Geometry::polydisc:
        e = {0, a, 0, b};
        group = letter - 1;
        break;
      case Geometry::ball_column:
        e = {letter - 1, a, 0, b};
        break;
      case Geometry::ball_row:
        e = {0, a, letter - 1, b};
        break;
    }
    auto& g = plan_groups[static_cast<std::size_t>(group)];
    (star ? g.conjs : g.ups).push_back(e);
  };
  int q = 0;
  for (std::size_t i = w.size(); i-- > 0; ++q) place(w[i], q, (q + 1) % length, true);
  for (std::size_t i = 0; i < v.size(); ++i, ++q) place(v[i], q, (q + 1) % length, false);

  const int dim = kind.geometry == Geometry::polydisc ? N : kind.m * N;
  std::vector<GroupPlan> plans;
  std::uint64_t work = 1;
  for (const auto& g : plan_groups) {
    if (g.ups.size() != g.conjs.size()) return 0;
    if (g.ups.empty()) continue;
    const int n = static_cast<int>(g.ups.size());
    if (n > table.max_n()) {
      throw Error(ErrorCode::unsupported_multiplicity,
                  "letter multiplicity " + std::to_string(n) + " exceeds max_n = " +
                      std::to_string(table.max_n()) + "; use the Monte Carlo engine");
    }
    GroupPlan plan;
    plan.wg = table.entry(n, dim);
    static thread_local std::map<int, std::vector<Permutation>> perm_cache;
    auto& perms = perm_cache[n];
    if (perms.empty()) perms = all_permutations(n);
    plan.sigmas = matchings(g, perms, true);
    plan.taus = matchings(g, perms, false);
    if (plan.sigmas.empty() || plan.taus.empty()) return 0;
    plan.type_index.assign(plan.sigmas.size(), std::vector<std::size_t>(plan.taus.size()));
    for (std::size_t s = 0; s < plan.sigmas.size(); ++s) {
      const auto sigma_inv = plan.sigmas[s].perm->inverse();
      for (std::size_t t = 0; t < plan.taus.size(); ++t) {
        plan.type_index[s][t] =
            plan.wg->index_of((*plan.taus[t].perm * sigma_inv).cycle_type());
      }
    }
    work *= plan.sigmas.size() * plan.taus.size();
    if (work > kMaxTerms) {
      throw Error(ErrorCode::unsupported_multiplicity,
                  "exact expansion exceeds " + std::to_string(kMaxTerms) +
                      " permutation pairs; use the Monte Carlo engine");
    }
    plans.push_back(std::move(plan));
  }

  // Tally (Wg class per group, number of free index classes) -> multiplicity.
  std::map<std::pair<std::vector<std::size_t>, int>, std::int64_t> tally;
  std::vector<std::size_t> key(plans.size());
  auto recurse = [&](auto&& self, std::size_t gi, const UnionFind& uf) -> void {
    if (gi == plans.size()) {
      ++tally[{key, uf.components}];
      return;
    }
    const auto& plan = plans[gi];
    for (std::size_t s = 0; s < plan.sigmas.size(); ++s) {
      UnionFind with_rows = uf;
      for (auto [a, b] : plan.sigmas[s].merges) with_rows.unite(a, b);
      for (std::size_t t = 0; t < plan.taus.size(); ++t) {
        UnionFind with_cols = with_rows;
        for (auto [a, b] : plan.taus[t].merges) with_cols.unite(a, b);
        key[gi] = plan.type_index[s][t];
        self(self, gi + 1, with_cols);
      }
    }
  };
  recurse(recurse, 0, UnionFind(length));

  Rational total = 0;
  for (const auto& [k, count] : tally) {
    Rational term = 1;
    for (std::size_t gi = 0; gi < plans.size(); ++gi) term *= plans[gi].wg->exact[k.first[gi]];
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(N),
                  static_cast<unsigned long>(k.second));
    total += term * power * mpz_class(static_cast<long>(count));
  }
  return total;
}

// ---------------------------------------------------------------------------

PairingCache::PairingCache(BoundaryKind kind, int N, const WeingartenTable& table)
    : kind_(kind), n_(N), table_(&table) {}

const Rational& PairingCache::get(const Word& w, const Word& v) {
  auto key = std::make_pair(w, v);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  auto value = pairing_moment_exact(w, v, kind_, n_, *table_);
  return values_.emplace(std::move(key), std::move(value)).first->second;
}

Complex sesquilinear_moment_exact(const NcSeries& f, const NcSeries& g, double r,
                                  BoundaryKind kind, int N, const WeingartenTable& table) {
  if (f.alphabet() != g.alphabet() || f.alphabet() != kind.m) {
    throw Error(ErrorCode::alphabet_mismatch,
                "series alphabets must match the boundary alphabet m = " +
                    std::to_string(kind.m));
  }
  if (r < 0.0) throw Error(ErrorCode::domain, "radius r must be nonnegative");
  PairingCache cache(kind, N, table);
  Complex total{};
  for (const auto& [w, gw] : g.terms()) {
    for (const auto& [v, fv] : f.terms()) {
      if (w.size() != v.size()) continue;
      const auto& moment = cache.get(w, v);
      if (moment == 0) continue;
      const double scale = std::pow(r, static_cast<double>(w.size() + v.size()));
      total += std::conj(gw) * fv * (scale * to_double(moment));
    }
  }
  return total / static_cast<double>(N);
}

}  // namespace nchardy
