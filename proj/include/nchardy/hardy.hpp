#pragma once

// Hardy spaces H^2 on the noncommutative polydisc and ball: coefficient inner
// products, boundary-integral profiles, coefficient recovery, membership in
// Upsilon_p^m, and the kernels K_p.

#include <optional>
#include <vector>

#include "nchardy/haar_mc.hpp"
#include "nchardy/weingarten.hpp"
#include "nchardy/words.hpp"

namespace nchardy {

enum class SpaceGeometry { polydisc, ball };

struct SpaceKind {
  SpaceGeometry geometry = SpaceGeometry::polydisc;
  int m = 1;

  static SpaceKind polydisc(int m) { return {SpaceGeometry::polydisc, m}; }
  static SpaceKind ball(int m) { return {SpaceGeometry::ball, m}; }
  static SpaceKind of(BoundaryKind kind);

  /// l^2_p weight of the space: 1 on the polydisc, m on the ball.
  double weight() const noexcept { return geometry == SpaceGeometry::ball ? m : 1.0; }
};

/// polydisc: sum_w conj(g_w) f_w; ball: sum_w m^{-|w|} conj(g_w) f_w.
Complex inner_product(const NcSeries& f, const NcSeries& g, SpaceKind kind);

enum class Engine { exact, mc, both };

const char* to_string(Engine e) noexcept;

struct EngineConfig {
  Engine engine = Engine::exact;
  std::size_t samples = 100000;
  SeededStream stream{};
  McOptions mc{};
  const WeingartenTable* table = nullptr;  // null: default table

  bool wants_exact() const noexcept { return engine != Engine::mc; }
  bool wants_mc() const noexcept { return engine != Engine::exact; }
  const WeingartenTable& weingarten() const {
    return table ? *table : default_weingarten_table();
  }
};

struct GridCell {
  double r = 0.0;
  int N = 0;
  std::optional<Complex> exact;
  std::optional<MCEstimate> mc;

  /// Exact value if present, else the Monte Carlo mean.
  Complex value() const;
  /// (exact - mc) / std_error when both are present and std_error > 0.
  std::optional<double> delta_in_std_errors() const;
};

/// Evaluates int (1/N) Tr(g(rX)^* f(rX)) d omega_N on every (r, N) cell.
/// Exact cells run concurrently; Monte Carlo cell i uses stream.derive(i).
std::vector<GridCell> pairing_grid(const NcSeries& f, const NcSeries& g, BoundaryKind kind,
                                   const std::vector<double>& r_grid,
                                   const std::vector<int>& n_grid, const EngineConfig& config);

struct RecoveryReport {
  Word word;
  double r = 1.0;
  std::vector<GridCell> cells;  // one per N, already rescaled to coefficient units
  Complex recovered;            // value at the largest N
  std::vector<Complex> trend;   // successive differences along the N grid
};

/// Recovers f_w from boundary integrals:
///   polydisc: r^{-|w|} int (1/N) Tr((X^w)^* f(rX)) d mu_N
///   ball:     m^{|w|} r^{-|w|} int (1/N) Tr((X^w)^* f(rX)) d nu_N
RecoveryReport coeff_recover(const NcSeries& f, const Word& w, double r, BoundaryKind kind,
                             const std::vector<int>& n_grid, const EngineConfig& config);

/// sum_l r^{2l} sum_{|w|=l} weight^{-l} conj(g_w) f_w for each r.
std::vector<Complex> radial_pairing(const NcSeries& f, const NcSeries& g, SpaceKind kind,
                                    const std::vector<double>& r_grid);

struct NormProfile {
  std::vector<GridCell> cells;
  double sup_estimate = 0.0;  // max over the grid; the grid is the claim
  GridCell sup_cell;
  GridCell corner;            // largest N, largest r
  double norm_squared = 0.0;  // ||f||^2 in H^2 of the matching space
};

NormProfile boundary_norm_profile(const NcSeries& f, BoundaryKind kind,
                                  const std::vector<double>& r_grid,
                                  const std::vector<int>& n_grid, const EngineConfig& config);

struct RadialProfiles {
  std::vector<GridCell> phi;  // polydisc boundary
  std::vector<GridCell> psi;  // ball (column) boundary
  std::vector<double> r_grid;
  std::vector<double> phi_series;  // sum_l r^{2l} sum |f_w|^2
  std::vector<double> psi_series;  // sum_l r^{2l} m^{-l} sum |f_w|^2
};

RadialProfiles radial_boundary_profiles(const NcSeries& f, const std::vector<double>& r_grid,
                                        const std::vector<int>& n_grid,
                                        const EngineConfig& config);

// ---------------------------------------------------------------------------

enum class UpsilonStatus { converged_with_bound, diverged_at_degree, inconclusive };

const char* to_string(UpsilonStatus s) noexcept;

struct UpsilonVerdict {
  UpsilonStatus status = UpsilonStatus::inconclusive;
  double bound = 0.0;        // converged_with_bound
  int diverged_degree = -1;  // diverged_at_degree
  int checked_degree = 0;
  double theta = 0.0;        // lambda_max(p sum X_i^* X_i)
  std::vector<double> partial_sum_norms;  // ||sum_{|w|<=L} p^{|w|} (X^w)^* X^w||, L = 0..
  std::vector<double> stratum_norms;
};

/// Decides whether sum_w p^{|w|} (X^w)^* X^w converges. When
/// theta = lambda_max(p sum X_i^* X_i) < 1 the sum is below 1/(1 - theta).
/// Otherwise the partial sums are accumulated: an exactly vanishing stratum
/// proves convergence (all later strata vanish too); strata whose norm stays at
/// or above divergence_threshold without decreasing over three consecutive
/// degrees are reported as divergence. Anything else is inconclusive.
UpsilonVerdict upsilon_membership(const MatrixTuple& x, double p, int max_degree = 24,
                                  double divergence_threshold = 1.0);

struct KernelValue {
  Matrix value;  // (N M) x (N M), Kronecker layout C^{NxN} (x) C^{MxM}
  int truncation_degree = 0;
  std::optional<double> tail_bound;
};

/// sum_{l<=L} sum_{|w|=l} p^l X^w (x) (Y^w)^*.
KernelValue kernel_eval(const MatrixTuple& x, const MatrixTuple& y, double p, int max_degree);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Swaps tensor factors: maps A (x) B on C^n (x) C^m to B (x) A.
Matrix swap_tensor_factors(const Matrix& k, int n, int m);

/// Realigned block Gram matrix of a kernel evaluated on points X_1..X_k:
/// entry ((i,a,b),(j,c,d)) = K(X_i, X_j)[(a,d),(b,c)] = sum_w p^{|w|} X_i^w[a,b] conj(X_j^w[c,d]).
/// Positive semidefinite for every truncation degree.
struct KernelGram {
  Matrix gram;
  double max_tail_bound = 0.0;
  bool all_tails_bounded = true;
};

KernelGram kernel_gram(const std::vector<MatrixTuple>& points, double p, int max_degree);

struct ReproduceResult {
  Complex lhs;
  Complex rhs;
  double residual = 0.0;
};

/// lhs = <f, e1^* K_p(., Y) e2>_{l^2_p} from the kernel-section coefficients
/// p^{|w|} e1^* (Y^w)^* e2; rhs = e2^* f(Y) e1.
ReproduceResult reproduce_check(const NcSeries& f, const MatrixTuple& y, const Vector& e1,
                                const Vector& e2, double p);

}  // namespace nchardy
