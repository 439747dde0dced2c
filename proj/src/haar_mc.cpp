#include "nchardy/haar_mc.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "nchardy/error.hpp"

namespace nchardy {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Moments {
  std::uint64_t count = 0;
  Complex mean{};
  double m2 = 0.0;  // sum |z - mean|^2
};

Moments merge(const Moments& a, const Moments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Moments out;
  out.count = a.count + b.count;
  const Complex delta = b.mean - a.mean;
  const double wb = static_cast<double>(b.count) / static_cast<double>(out.count);
  out.mean = a.mean + delta * wb;
  out.m2 = a.m2 + b.m2 +
           std::norm(delta) * static_cast<double>(a.count) * static_cast<double>(b.count) /
               static_cast<double>(out.count);
  return out;
}

Moments tree_reduce(std::vector<Moments> parts) {
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<Moments> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(merge(parts[i], parts[i + 1]));
    if (parts.size() % 2) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NC_HARDY_SEED")) {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
  }
  return kFallbackSeed;
}

SeededStream SeededStream::derive(std::uint64_t child) const {
  return {seed, splitmix64(stream_id ^ splitmix64(child + 0x632be59bd9b4e019ULL))};
}

Rng SeededStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return Rng(seq);
}

Matrix sample_haar_unitary(int N, Rng& rng) {
  if (N < 1) throw Error(ErrorCode::domain, "unitary dimension must be >= 1");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix z(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < N; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

Matrix sample_haar_unitary(int N, const SeededStream& stream) {
  auto rng = stream.engine();
  return sample_haar_unitary(N, rng);
}

MatrixTuple sample_boundary(BoundaryKind kind, int N, Rng& rng) {
  if (kind.m < 1) throw Error(ErrorCode::invalid_argument, "alphabet size must be >= 1");
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(kind.m));
  switch (kind.geometry) {
    case Geometry::polydisc:
      for (int k = 0; k < kind.m; ++k) blocks.push_back(sample_haar_unitary(N, rng));
      break;
    case Geometry::ball_column: {
      const Matrix u = sample_haar_unitary(kind.m * N, rng);
      for (int k = 0; k < kind.m; ++k) blocks.push_back(u.block(k * N, 0, N, N));
      break;
    }
    case Geometry::ball_row: {
      const Matrix u = sample_haar_unitary(kind.m * N, rng);
      for (int k = 0; k < kind.m; ++k) blocks.push_back(u.block(0, k * N, N, N));
      break;
    }
  }
  return MatrixTuple(kind.m, std::move(blocks));
}

MatrixTuple sample_boundary(BoundaryKind kind, int N, const SeededStream& stream) {
  auto rng = stream.engine();
  return sample_boundary(kind, N, rng);
}

MCEstimate mc_estimate(std::size_t samples, const SeededStream& stream,
                       const SampleFunction& draw, const McOptions& options) {
  if (samples < 2) throw Error(ErrorCode::domain, "Monte Carlo needs at least 2 samples");
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_size);
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<Moments> parts(chunks);

  auto run_chunk = [&](std::size_t c) {
    auto rng = stream.derive(c).engine();
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(samples, begin + chunk);
    Moments local;
    for (std::size_t i = begin; i < end; ++i) {
      const Complex z = draw(rng);
      ++local.count;
      const Complex delta = z - local.mean;
      local.mean += delta / static_cast<double>(local.count);
      local.m2 += std::real(std::conj(delta) * (z - local.mean));
    }
    parts[c] = local;
  };

  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, chunks));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
          try {
            run_chunk(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = chunks;
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  const Moments total = tree_reduce(std::move(parts));
  MCEstimate out;
  out.mean = total.mean;
  out.samples = total.count;
  out.seed = stream.seed;
  const double n = static_cast<double>(total.count);
  out.std_error = std::sqrt(std::max(0.0, total.m2) / (n - 1.0)) / std::sqrt(n);
  return out;
}

MCEstimate mc_pairing(const NcSeries& f, const NcSeries& g, double r, BoundaryKind kind,
                      int N, std::size_t samples, const SeededStream& stream,
                      const McOptions& options) {
  if (f.alphabet() != g.alphabet() || f.alphabet() != kind.m) {
    throw Error(ErrorCode::alphabet_mismatch,
                "series alphabets must match the boundary alphabet m = " +
                    std::to_string(kind.m));
  }
  if (N < 1) throw Error(ErrorCode::domain, "matrix level N must be >= 1");
  return mc_estimate(
      samples, stream,
      [&](Rng& rng) {
        const auto x = sample_boundary(kind, N, rng);
        const Matrix fx = series_eval(f, x, r);
        const Matrix gx = series_eval(g, x, r);
        return (gx.adjoint() * fx).trace() / static_cast<double>(N);
      },
      options);
}

void validate_alternating(const std::vector<FreenessFactor>& factors) {
  if (factors.empty()) throw Error(ErrorCode::structure, "no factors given");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    if (f.ensemble < 1) {
      throw Error(ErrorCode::structure, "factor " + std::to_string(i) + ": ensemble must be >= 1");
    }
    bool has_term = false;
    for (const auto& [power, c] : f.powers) {
      if (c == Complex{}) continue;
      if (power == 0) {
        throw Error(ErrorCode::structure,
                    "factor " + std::to_string(i) + " is not centered (constant term)");
      }
      has_term = true;
    }
    if (!has_term) {
      throw Error(ErrorCode::structure, "factor " + std::to_string(i) + " is the zero polynomial");
    }
    if (i > 0 && factors[i - 1].ensemble == f.ensemble) {
      throw Error(ErrorCode::structure, "factors " + std::to_string(i - 1) + " and " +
                                            std::to_string(i) +
                                            " come from the same ensemble");
    }
  }
}

FreenessReport freeness_diagnostic(const std::vector<FreenessFactor>& factors,
                                   const std::vector<int>& n_grid, std::size_t samples,
                                   const SeededStream& stream, const McOptions& options) {
  validate_alternating(factors);
  if (n_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty N grid");
  int ensembles = 0;
  for (const auto& f : factors) ensembles = std::max(ensembles, f.ensemble);

  FreenessReport report;
  for (std::size_t cell = 0; cell < n_grid.size(); ++cell) {
    const int N = n_grid[cell];
    auto draw = [&](Rng& rng) {
      std::vector<Matrix> u;
      u.reserve(static_cast<std::size_t>(ensembles));
      for (int k = 0; k < ensembles; ++k) u.push_back(sample_haar_unitary(N, rng));
      Matrix product = Matrix::Identity(N, N);
      for (const auto& f : factors) {
        const Matrix& base = u[f.ensemble - 1];
        Matrix poly = Matrix::Zero(N, N);
        for (const auto& [power, c] : f.powers) {
          if (c == Complex{}) continue;
          Matrix term = Matrix::Identity(N, N);
          const Matrix step = power > 0 ? base : Matrix(base.adjoint());
          for (int i = 0; i < std::abs(power); ++i) term = term * step;
          poly += c * term;
        }
        product = product * poly;
      }
      return product.trace() / static_cast<double>(N);
    };
    FreenessRow row;
    row.N = N;
    row.estimate = mc_estimate(samples, stream.derive(cell), draw, options);
    row.envelope = std::abs(row.estimate.mean) + 3.0 * row.estimate.std_error;
    report.rows.push_back(row);
  }

  report.envelope_decreasing = true;
  report.magnitude_decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    if (!(b.envelope < a.envelope)) report.envelope_decreasing = false;
    if (!(std::abs(b.estimate.mean) < std::abs(a.estimate.mean))) report.magnitude_decreasing = false;
  }
  if (report.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(report.rows.size());
    for (const auto& row : report.rows) {
      const double x = std::log(static_cast<double>(row.N));
      const double y = std::log(std::max(row.envelope, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = k * sxx - sx * sx;
    report.envelope_log_slope = denom != 0.0 ? (k * sxy - sx * sy) / denom : 0.0;
  }
  return report;
}

}  // namespace nchardy
