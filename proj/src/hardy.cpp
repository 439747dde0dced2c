#include "nchardy/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "nchardy/error.hpp"

namespace nchardy {

SpaceKind SpaceKind::of(BoundaryKind kind) {
  return {kind.is_ball() ? SpaceGeometry::ball : SpaceGeometry::polydisc, kind.m};
}

const char* to_string(Engine e) noexcept {
  switch (e) {
    case Engine::exact: return "exact";
    case Engine::mc: return "mc";
    case Engine::both: return "both";
  }
  return "?";
}

const char* to_string(UpsilonStatus s) noexcept {
  switch (s) {
    case UpsilonStatus::converged_with_bound: return "ConvergedWithBound";
    case UpsilonStatus::diverged_at_degree: return "DivergedAtDegree";
    case UpsilonStatus::inconclusive: return "Inconclusive";
  }
  return "?";
}

Complex GridCell::value() const {
  if (exact) return *exact;
  if (mc) return mc->mean;
  return {};
}

std::optional<double> GridCell::delta_in_std_errors() const {
  if (!exact || !mc || !(mc->std_error > 0.0)) return std::nullopt;
  return std::abs(*exact - mc->mean) / mc->std_error;
}

Complex inner_product(const NcSeries& f, const NcSeries& g, SpaceKind kind) {
  if (f.alphabet() != g.alphabet() || f.alphabet() != kind.m) {
    throw Error(ErrorCode::alphabet_mismatch, "inner product of series over different alphabets");
  }
  const double weight = kind.weight();
  Complex total{};
  // Both maps are shortlex ordered; walk them together.
  auto a = f.terms().begin();
  auto b = g.terms().begin();
  while (a != f.terms().end() && b != g.terms().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      total += std::conj(b->second) * a->second *
               std::pow(weight, -static_cast<double>(a->first.size()));
      ++a;
      ++b;
    }
  }
  return total;
}

namespace {

void check_grid(const std::vector<double>& r_grid, const std::vector<int>& n_grid) {
  if (r_grid.empty() || n_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty grid");
  for (double r : r_grid)
    if (!(r >= 0.0)) throw Error(ErrorCode::domain, "radii must be nonnegative");
  for (int N : n_grid)
    if (N < 1) throw Error(ErrorCode::domain, "matrix levels must be >= 1");
}

}  // namespace

std::vector<GridCell> pairing_grid(const NcSeries& f, const NcSeries& g, BoundaryKind kind,
                                   const std::vector<double>& r_grid,
                                   const std::vector<int>& n_grid, const EngineConfig& config) {
  check_grid(r_grid, n_grid);
  if (f.alphabet() != kind.m || g.alphabet() != kind.m) {
    throw Error(ErrorCode::alphabet_mismatch,
                "series alphabets must match the boundary alphabet m = " + std::to_string(kind.m));
  }
  std::vector<GridCell> cells;
  for (int N : n_grid)
    for (double r : r_grid) cells.push_back({r, N, std::nullopt, std::nullopt});

  if (config.wants_exact()) {
    const auto& table = config.weingarten();
    std::vector<std::future<Complex>> pending;
    pending.reserve(cells.size());
    for (const auto& cell : cells) {
      pending.push_back(std::async(std::launch::async, [&f, &g, kind, &table, cell] {
        return sesquilinear_moment_exact(f, g, cell.r, kind, cell.N, table);
      }));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i].exact = pending[i].get();
  }
  if (config.wants_mc()) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      cells[i].mc = mc_pairing(f, g, cells[i].r, kind, cells[i].N, config.samples,
                               config.stream.derive(i), config.mc);
    }
  }
  return cells;
}

RecoveryReport coeff_recover(const NcSeries& f, const Word& w, double r, BoundaryKind kind,
                             const std::vector<int>& n_grid, const EngineConfig& config) {
  if (!(r > 0.0)) throw Error(ErrorCode::domain, "recovery radius must be positive");
  if (w.max_letter() > kind.m) {
    throw Error(ErrorCode::alphabet_mismatch, "recovery word exceeds the alphabet");
  }
  const auto probe = NcSeries::monomial(kind.m, w);
  auto cells = pairing_grid(f, probe, kind, {r}, n_grid, config);

  // The probe X^w was also evaluated at rX, contributing an extra r^{|w|}.
  const double len = static_cast<double>(w.size());
  double scale = std::pow(r, -2.0 * len);
  if (kind.is_ball()) scale *= std::pow(static_cast<double>(kind.m), len);
  for (auto& c : cells) {
    if (c.exact) *c.exact *= scale;
    if (c.mc) {
      c.mc->mean *= scale;
      c.mc->std_error *= scale;
    }
  }

  RecoveryReport report;
  report.word = w;
  report.r = r;
  report.cells = std::move(cells);
  const auto largest = std::max_element(report.cells.begin(), report.cells.end(),
                                        [](const auto& a, const auto& b) { return a.N < b.N; });
  report.recovered = largest->value();
  for (std::size_t i = 1; i < report.cells.size(); ++i) {
    report.trend.push_back(report.cells[i].value() - report.cells[i - 1].value());
  }
  return report;
}

std::vector<Complex> radial_pairing(const NcSeries& f, const NcSeries& g, SpaceKind kind,
                                    const std::vector<double>& r_grid) {
  if (f.alphabet() != g.alphabet() || f.alphabet() != kind.m) {
    throw Error(ErrorCode::alphabet_mismatch, "radial pairing of series over different alphabets");
  }
  // Collect sum_{|w|=l} conj(g_w) f_w per length l.
  std::vector<Complex> strata;
  for (const auto& [w, fw] : f.terms()) {
    const Complex gw = g.coefficient(w);
    if (gw == Complex{}) continue;
    if (strata.size() <= w.size()) strata.resize(w.size() + 1);
    strata[w.size()] += std::conj(gw) * fw;
  }
  std::vector<Complex> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    Complex total{};
    for (std::size_t l = 0; l < strata.size(); ++l) {
      const double dl = static_cast<double>(l);
      total += strata[l] * std::pow(r, 2.0 * dl) * std::pow(kind.weight(), -dl);
    }
    out.push_back(total);
  }
  return out;
}

NormProfile boundary_norm_profile(const NcSeries& f, BoundaryKind kind,
                                  const std::vector<double>& r_grid,
                                  const std::vector<int>& n_grid, const EngineConfig& config) {
  NormProfile profile;
  profile.cells = pairing_grid(f, f, kind, r_grid, n_grid, config);
  profile.sup_cell = profile.cells.front();
  profile.corner = profile.cells.front();
  for (const auto& c : profile.cells) {
    if (c.value().real() > profile.sup_cell.value().real()) profile.sup_cell = c;
    if (c.N > profile.corner.N || (c.N == profile.corner.N && c.r > profile.corner.r))
      profile.corner = c;
  }
  profile.sup_estimate = profile.sup_cell.value().real();
  profile.norm_squared = inner_product(f, f, SpaceKind::of(kind)).real();
  return profile;
}

RadialProfiles radial_boundary_profiles(const NcSeries& f, const std::vector<double>& r_grid,
                                        const std::vector<int>& n_grid,
                                        const EngineConfig& config) {
  const int m = f.alphabet();
  RadialProfiles out;
  out.r_grid = r_grid;
  out.phi = pairing_grid(f, f, BoundaryKind::polydisc(m), r_grid, n_grid, config);
  EngineConfig ball_config = config;
  ball_config.stream = config.stream.derive(0xba11);
  out.psi = pairing_grid(f, f, BoundaryKind::ball_column(m), r_grid, n_grid, ball_config);
  for (const auto& v : radial_pairing(f, f, SpaceKind::polydisc(m), r_grid))
    out.phi_series.push_back(v.real());
  for (const auto& v : radial_pairing(f, f, SpaceKind::ball(m), r_grid))
    out.psi_series.push_back(v.real());
  return out;
}

// ---------------------------------------------------------------------------

UpsilonVerdict upsilon_membership(const MatrixTuple& x, double p, int max_degree,
                                  double divergence_threshold) {
  if (!(p > 0.0)) throw Error(ErrorCode::domain, "weight p must be positive");
  if (max_degree < 0) throw Error(ErrorCode::domain, "negative maximal degree");
  constexpr int kWindow = 3;

  UpsilonVerdict verdict;
  verdict.theta = column_contraction(x, p);
  const int n = x.dim();
  Matrix stratum = Matrix::Identity(n, n);  // sum_{|w|=l} p^l (X^w)^* X^w
  Matrix partial = Matrix::Zero(n, n);
  int vanished_at = -1;
  int grow_run = 0;

  for (int l = 0; l <= max_degree; ++l) {
    if (l > 0) {
      Matrix next = Matrix::Zero(n, n);
      for (const auto& a : x.matrices()) next += a.adjoint() * stratum * a;
      stratum = p * next;
    }
    partial += stratum;
    const double s = n ? stratum.operatorNorm() : 0.0;
    verdict.stratum_norms.push_back(s);
    verdict.partial_sum_norms.push_back(n ? partial.operatorNorm() : 0.0);
    verdict.checked_degree = l;
    if (s == 0.0) {
      vanished_at = l;
      break;
    }
    if (verdict.status == UpsilonStatus::inconclusive && !(verdict.theta < 1.0)) {
      const bool growing = l > 0 && s >= verdict.stratum_norms[l - 1] * (1.0 - 1e-12);
      grow_run = (s >= divergence_threshold && growing) ? grow_run + 1 : 0;
      if (grow_run >= kWindow) {
        verdict.status = UpsilonStatus::diverged_at_degree;
        verdict.diverged_degree = l;
        break;
      }
    }
  }

  if (verdict.theta < 1.0) {
    verdict.status = UpsilonStatus::converged_with_bound;
    verdict.bound = 1.0 / (1.0 - verdict.theta);
  } else if (vanished_at >= 0) {
    verdict.status = UpsilonStatus::converged_with_bound;
    verdict.bound = verdict.partial_sum_norms.back();
  }
  return verdict;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix swap_tensor_factors(const Matrix& k, int n, int m) {
  Matrix out(k.rows(), k.cols());
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < m; ++d)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < m; ++c) out(d * n + a, c * n + b) = k(a * m + d, b * m + c);
  return out;
}

KernelValue kernel_eval(const MatrixTuple& x, const MatrixTuple& y, double p, int max_degree) {
  if (x.alphabet() != y.alphabet()) {
    throw Error(ErrorCode::alphabet_mismatch, "kernel arguments over different alphabets");
  }
  if (!(p > 0.0)) throw Error(ErrorCode::domain, "weight p must be positive");
  if (max_degree < 0) throw Error(ErrorCode::domain, "negative truncation degree");

  const int n = x.dim();
  const int mm = y.dim();
  const Matrix id_n = Matrix::Identity(n, n);
  const Matrix id_m = Matrix::Identity(mm, mm);
  std::vector<Matrix> left;   // X_k (x) I
  std::vector<Matrix> right;  // I (x) Y_k^*
  for (int k = 1; k <= x.alphabet(); ++k) {
    left.push_back(kron(x[k], id_m));
    right.push_back(kron(id_n, y[k].adjoint()));
  }

  KernelValue out;
  out.truncation_degree = max_degree;
  Matrix term = Matrix::Identity(n * mm, n * mm);
  out.value = term;
  for (int l = 1; l <= max_degree; ++l) {
    Matrix next = Matrix::Zero(n * mm, n * mm);
    for (std::size_t k = 0; k < left.size(); ++k) next += left[k] * term * right[k];
    term = p * next;
    out.value += term;
  }

  // ||sum_{|w|=l} p^l X^w (x) (Y^w)^*|| <= (theta_X theta_Y)^{l/2} by Cauchy-Schwarz.
  const double tx = column_contraction(x, p);
  const double ty = column_contraction(y, p);
  if (tx < 1.0 && ty < 1.0) {
    const double q = std::sqrt(tx * ty);
    out.tail_bound = std::pow(q, max_degree + 1) / (1.0 - q);
  }
  return out;
}

KernelGram kernel_gram(const std::vector<MatrixTuple>& points, double p, int max_degree) {
  KernelGram out;
  std::vector<int> offsets{0};
  for (const auto& pt : points) offsets.push_back(offsets.back() + pt.dim() * pt.dim());
  out.gram = Matrix::Zero(offsets.back(), offsets.back());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      const auto kv = kernel_eval(points[i], points[j], p, max_degree);
      if (kv.tail_bound)
        out.max_tail_bound = std::max(out.max_tail_bound, *kv.tail_bound);
      else
        out.all_tails_bounded = false;
      const int ni = points[i].dim();
      const int nj = points[j].dim();
      for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b)
          for (int c = 0; c < nj; ++c)
            for (int d = 0; d < nj; ++d)
              out.gram(offsets[i] + a * ni + b, offsets[j] + c * nj + d) =
                  kv.value(a * nj + d, b * nj + c);
    }
  }
  return out;
}

ReproduceResult reproduce_check(const NcSeries& f, const MatrixTuple& y, const Vector& e1,
                                const Vector& e2, double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::domain, "weight p must be positive");
  if (e1.size() != y.dim() || e2.size() != y.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "vectors must have the dimension of Y");
  }
  if (f.alphabet() != y.alphabet()) {
    throw Error(ErrorCode::alphabet_mismatch, "series and Y over different alphabets");
  }
  ReproduceResult out;
  for (const auto& [w, fw] : f.terms()) {
    const double pl = std::pow(p, static_cast<double>(w.size()));
    const Complex section = pl * e1.dot(word_eval(y, w).adjoint() * e2);  // e1^* (Y^w)^* e2
    out.lhs += fw * std::conj(section) / pl;
  }
  out.rhs = e2.dot(series_eval(f, y) * e1);
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace nchardy
