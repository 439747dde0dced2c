#pragma once

// Haar sampling of the distinguished boundaries and seeded, worker-count
// independent Monte Carlo estimation of tracial integrals.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "nchardy/weingarten.hpp"
#include "nchardy/words.hpp"

namespace nchardy {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kFallbackSeed = 20240917;

/// Seed from NC_HARDY_SEED if set and parseable, otherwise kFallbackSeed.
std::uint64_t default_seed();

struct SeededStream {
  std::uint64_t seed = kFallbackSeed;
  std::uint64_t stream_id = 0;

  /// Independent child stream; derive(i) differs for each i and from *this.
  SeededStream derive(std::uint64_t child) const;
  Rng engine() const;
};

struct MCEstimate {
  Complex mean;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  unsigned workers = 0;          // 0: hardware concurrency
  std::size_t chunk_size = 512;  // samples per derived stream
};

/// Complex Ginibre matrix orthonormalized by QR, with the phases of R's
/// diagonal moved into Q so the result is exactly Haar distributed.
Matrix sample_haar_unitary(int N, Rng& rng);
Matrix sample_haar_unitary(int N, const SeededStream& stream);

MatrixTuple sample_boundary(BoundaryKind kind, int N, Rng& rng);
MatrixTuple sample_boundary(BoundaryKind kind, int N, const SeededStream& stream);

using SampleFunction = std::function<Complex(Rng&)>;

/// Mean of `draw` over `samples` draws. The sample range is cut into chunks,
/// chunk i draws from stream.derive(i), and chunk statistics are merged by a
/// fixed pairwise tree, so the result does not depend on the worker count.
/// `draw` is called concurrently and must not share mutable state.
MCEstimate mc_estimate(std::size_t samples, const SeededStream& stream,
                       const SampleFunction& draw, const McOptions& options = {});

/// Estimate of int (1/N) Tr(g(rX)^* f(rX)) d omega_N.
MCEstimate mc_pairing(const NcSeries& f, const NcSeries& g, double r, BoundaryKind kind,
                      int N, std::size_t samples, const SeededStream& stream,
                      const McOptions& options = {});

/// Laurent polynomial sum_a c_a U_k^a in one Haar unitary U_k (U^{-1} = U^*).
struct FreenessFactor {
  int ensemble = 1;
  std::map<int, Complex> powers;
};

struct FreenessRow {
  int N = 0;
  MCEstimate estimate;
  double envelope = 0.0;  // |mean| + 3 std_error
};

struct FreenessReport {
  std::vector<FreenessRow> rows;
  /// Least-squares slope of log(envelope) against log(N); negative when the
  /// alternating moment concentrates at 0.
  double envelope_log_slope = 0.0;
  bool envelope_decreasing = false;
  bool magnitude_decreasing = false;  // raw |mean| strictly decreasing
};

/// Checks that each factor is centered (no constant term, so
/// E (1/N) Tr p(U_k) = 0 exactly) and that consecutive factors come from
/// different ensembles.
void validate_alternating(const std::vector<FreenessFactor>& factors);

FreenessReport freeness_diagnostic(const std::vector<FreenessFactor>& factors,
                                   const std::vector<int>& n_grid, std::size_t samples,
                                   const SeededStream& stream, const McOptions& options = {});

}  // namespace nchardy
