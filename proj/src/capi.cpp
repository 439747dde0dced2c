#include "nchardy/nchardy.h"

#include <cstring>
#include <new>
#include <string>

#include "nchardy/error.hpp"
#include "nchardy/hardy.hpp"
#include "nchardy/io.hpp"
#include "nchardy/selftest.hpp"

struct nch_series {
  nchardy::NcSeries value;
};

struct nch_tuple {
  nchardy::MatrixTuple value;
};

namespace {

using namespace nchardy;
using io::json;

thread_local std::string g_last_error;

nch_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return NCH_E_INVALID_ARGUMENT;
    case ErrorCode::alphabet_mismatch: return NCH_E_ALPHABET_MISMATCH;
    case ErrorCode::domain: return NCH_E_DOMAIN;
    case ErrorCode::gram_singular: return NCH_E_GRAM_SINGULAR;
    case ErrorCode::unsupported_multiplicity: return NCH_E_UNSUPPORTED_MULTIPLICITY;
    case ErrorCode::index_out_of_range: return NCH_E_INDEX_OUT_OF_RANGE;
    case ErrorCode::inconclusive_tail: return NCH_E_INCONCLUSIVE_TAIL;
    case ErrorCode::structure: return NCH_E_STRUCTURE;
    case ErrorCode::parse: return NCH_E_PARSE;
    case ErrorCode::singular_matrix: return NCH_E_SINGULAR_MATRIX;
    case ErrorCode::dimension_mismatch: return NCH_E_DIMENSION_MISMATCH;
  }
  return NCH_E_INTERNAL;
}

template <class F>
nch_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return NCH_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NCH_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NCH_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::invalid_argument, what);
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

BoundaryKind boundary(nch_geometry g, int m) {
  switch (g) {
    case NCH_POLYDISC: return BoundaryKind::polydisc(m);
    case NCH_BALL: return BoundaryKind::ball_column(m);
    case NCH_BALL_ROW: return BoundaryKind::ball_row(m);
  }
  throw Error(ErrorCode::invalid_argument, "unknown geometry");
}

Word word_from(const int* letters, std::size_t length) {
  require(letters || length == 0, "null word");
  return Word(std::span<const int>(letters, length));
}

std::vector<int> n_grid_of(const nch_config& cfg) {
  require(cfg.n_grid && cfg.n_count > 0, "empty N grid");
  return {cfg.n_grid, cfg.n_grid + cfg.n_count};
}

std::vector<double> r_grid_of(const nch_config& cfg) {
  require(cfg.r_grid && cfg.r_count > 0, "empty r grid");
  return {cfg.r_grid, cfg.r_grid + cfg.r_count};
}

EngineConfig engine_of(const nch_config& cfg) {
  EngineConfig e;
  switch (cfg.engine) {
    case NCH_EXACT: e.engine = Engine::exact; break;
    case NCH_MC: e.engine = Engine::mc; break;
    case NCH_BOTH: e.engine = Engine::both; break;
    default: throw Error(ErrorCode::invalid_argument, "unknown engine");
  }
  if (e.wants_mc()) require(cfg.samples >= 2, "Monte Carlo needs at least 2 samples");
  e.samples = cfg.samples;
  e.stream = SeededStream{cfg.seed, 0};
  e.mc.workers = cfg.workers;
  return e;
}

int alphabet_of(const nch_config& cfg, const NcSeries& f) { return cfg.m > 0 ? cfg.m : f.alphabet(); }

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

extern "C" {

int nch_status_is_usage(nch_status s) {
  switch (s) {
    case NCH_E_INVALID_ARGUMENT:
    case NCH_E_ALPHABET_MISMATCH:
    case NCH_E_INDEX_OUT_OF_RANGE:
    case NCH_E_STRUCTURE:
    case NCH_E_PARSE:
    case NCH_E_DIMENSION_MISMATCH:
      return 1;
    default:
      return 0;
  }
}

const char* nch_status_name(nch_status s) {
  switch (s) {
    case NCH_OK: return "ok";
    case NCH_E_INVALID_ARGUMENT: return to_string(ErrorCode::invalid_argument);
    case NCH_E_ALPHABET_MISMATCH: return to_string(ErrorCode::alphabet_mismatch);
    case NCH_E_DOMAIN: return to_string(ErrorCode::domain);
    case NCH_E_GRAM_SINGULAR: return to_string(ErrorCode::gram_singular);
    case NCH_E_UNSUPPORTED_MULTIPLICITY: return to_string(ErrorCode::unsupported_multiplicity);
    case NCH_E_INDEX_OUT_OF_RANGE: return to_string(ErrorCode::index_out_of_range);
    case NCH_E_INCONCLUSIVE_TAIL: return to_string(ErrorCode::inconclusive_tail);
    case NCH_E_STRUCTURE: return to_string(ErrorCode::structure);
    case NCH_E_PARSE: return to_string(ErrorCode::parse);
    case NCH_E_SINGULAR_MATRIX: return to_string(ErrorCode::singular_matrix);
    case NCH_E_DIMENSION_MISMATCH: return to_string(ErrorCode::dimension_mismatch);
    case NCH_E_INTERNAL: return "internal";
  }
  return "unknown";
}

void nch_config_init(nch_config* cfg) {
  if (!cfg) return;
  *cfg = nch_config{};
  cfg->geometry = NCH_POLYDISC;
  cfg->m = 0;
  cfg->samples = 100000;
  cfg->seed = default_seed();
  cfg->engine = NCH_EXACT;
  cfg->format = NCH_JSON;
}

uint64_t nch_default_seed(void) { return default_seed(); }

const char* nch_version(void) { return "0.1.0"; }

const char* nch_last_error(void) { return g_last_error.c_str(); }

void nch_string_free(char* s) { delete[] s; }

nch_status nch_series_new(int m, nch_series** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new nch_series{NcSeries(m)};
  });
}

nch_status nch_series_parse(const char* text, nch_series** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new nch_series{io::parse_series(text)};
  });
}

nch_status nch_series_add(nch_series* s, const int* letters, size_t length, double re, double im) {
  return guarded([&] {
    require(s, "null series");
    s->value.add(word_from(letters, length), Complex(re, im));
  });
}

nch_status nch_series_to_json(const nch_series* s, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = dup(io::dump_series(s->value));
  });
}

int nch_series_alphabet(const nch_series* s) { return s ? s->value.alphabet() : 0; }

void nch_series_free(nch_series* s) { delete s; }

nch_status nch_tuple_parse(const char* text, nch_tuple** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new nch_tuple{io::parse_tuple(text)};
  });
}

nch_status nch_tuple_to_json(const nch_tuple* t, char** out) {
  return guarded([&] {
    require(t && out, "null argument");
    *out = dup(io::tuple_to_json(t->value).dump());
  });
}

int nch_tuple_dim(const nch_tuple* t) { return t ? t->value.dim() : 0; }

void nch_tuple_free(nch_tuple* t) { delete t; }

nch_status nch_wg_table(int n, int N, char** out_json) {
  return guarded([&] {
    require(out_json, "null output");
    const auto entry = default_weingarten_table().entry(n, N);
    json rows = json::array();
    for (std::size_t i = 0; i < entry->types.size(); ++i) {
      rows.push_back({{"cycle_type", entry->types[i].to_string()},
                      {"exact", entry->exact[i].get_str()},
                      {"value", entry->approx[i]}});
    }
    *out_json = dup(json{{"n", n}, {"N", N}, {"rows", std::move(rows)}}.dump());
  });
}

nch_status nch_wg_value(const int* images, size_t n, int N, double* out) {
  return guarded([&] {
    require(images && out && n > 0, "null argument");
    const auto sigma = Permutation::from_one_based(std::vector<int>(images, images + n));
    *out = weingarten(static_cast<int>(n), N, sigma);
  });
}

nch_status nch_entry_moment(const int* ups, size_t n_ups, const int* conjs, size_t n_conjs, int N,
                            char** out_json) {
  return guarded([&] {
    require(out_json, "null output");
    require((ups || n_ups == 0) && (conjs || n_conjs == 0), "null index list");
    std::vector<EntryIndex> a, b;
    for (size_t i = 0; i < n_ups; ++i) a.push_back({ups[2 * i], ups[2 * i + 1]});
    for (size_t i = 0; i < n_conjs; ++i) b.push_back({conjs[2 * i], conjs[2 * i + 1]});
    const Rational value = haar_entry_moment(a, b, N);
    *out_json = dup(json{{"N", N}, {"exact", value.get_str()}, {"value", to_double(value)}}.dump());
  });
}

nch_status nch_pairing_word(const int* w, size_t w_len, const int* v, size_t v_len,
                            nch_geometry geometry, int m, int N, char** out_json) {
  return guarded([&] {
    require(out_json, "null output");
    const Rational value =
        pairing_moment_exact(word_from(w, w_len), word_from(v, v_len), boundary(geometry, m), N);
    *out_json = dup(json{{"N", N},
                         {"space", to_string(boundary(geometry, m).geometry)},
                         {"exact", value.get_str()},
                         {"value", to_double(value)}}
                        .dump());
  });
}

nch_status nch_pairing(const nch_series* f, const nch_series* g, const nch_config* cfg,
                       char** out) {
  return guarded([&] {
    require(f && g && cfg && out, "null argument");
    const auto kind = boundary(cfg->geometry, alphabet_of(*cfg, f->value));
    const auto cells = pairing_grid(f->value, g->value, kind, r_grid_of(*cfg), n_grid_of(*cfg),
                                    engine_of(*cfg));
    if (cfg->format == NCH_CSV)
      *out = dup(io::grid_to_csv(cells));
    else
      *out = dup(json{{"cells", io::cells_to_json(cells)}}.dump());
  });
}

nch_status nch_recover(const nch_series* f, const int* w, size_t w_len, double r,
                       const nch_config* cfg, char** out) {
  return guarded([&] {
    require(f && cfg && out, "null argument");
    const auto kind = boundary(cfg->geometry, alphabet_of(*cfg, f->value));
    const auto report =
        coeff_recover(f->value, word_from(w, w_len), r, kind, n_grid_of(*cfg), engine_of(*cfg));
    if (cfg->format == NCH_CSV)
      *out = dup(io::grid_to_csv(report.cells));
    else
      *out = dup(io::recovery_to_json(report).dump());
  });
}

nch_status nch_inner(const nch_series* f, const nch_series* g, nch_geometry geometry, double* re,
                     double* im) {
  return guarded([&] {
    require(f && g && re && im, "null argument");
    const auto kind = SpaceKind::of(boundary(geometry, f->value.alphabet()));
    const Complex z = inner_product(f->value, g->value, kind);
    *re = z.real();
    *im = z.imag();
  });
}

nch_status nch_upsilon(const nch_tuple* x, double p, int max_degree, double threshold,
                       char** out_json) {
  return guarded([&] {
    require(x && out_json, "null argument");
    *out_json = dup(io::verdict_to_json(upsilon_membership(x->value, p, max_degree, threshold)).dump());
  });
}

nch_status nch_kernel(const nch_tuple* x, const nch_tuple* y, double p, int max_degree,
                      char** out_json) {
  return guarded([&] {
    require(x && y && out_json, "null argument");
    const auto kv = kernel_eval(x->value, y->value, p, max_degree);
    json rows = json::array();
    for (Eigen::Index i = 0; i < kv.value.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < kv.value.cols(); ++j)
        row.push_back({kv.value(i, j).real(), kv.value(i, j).imag()});
      rows.push_back(std::move(row));
    }
    json out{{"truncation_degree", kv.truncation_degree}, {"value", std::move(rows)}};
    out["tail_bound"] = kv.tail_bound ? json(*kv.tail_bound) : json(nullptr);
    *out_json = dup(out.dump());
  });
}

nch_status nch_reproduce(const nch_series* f, const nch_tuple* y, const double* e1,
                         const double* e2, double p, char** out_json) {
  return guarded([&] {
    require(f && y && e1 && e2 && out_json, "null argument");
    const int n = y->value.dim();
    Vector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = Complex(e1[2 * i], e1[2 * i + 1]);
      b(i) = Complex(e2[2 * i], e2[2 * i + 1]);
    }
    const auto res = reproduce_check(f->value, y->value, a, b, p);
    *out_json = dup(json{{"lhs", complex_json(res.lhs)},
                         {"rhs", complex_json(res.rhs)},
                         {"residual", res.residual}}
                        .dump());
  });
}

nch_status nch_profile(const nch_series* f, const nch_config* cfg, char** out) {
  return guarded([&] {
    require(f && cfg && out, "null argument");
    const auto kind = boundary(cfg->geometry, alphabet_of(*cfg, f->value));
    const auto r_grid = r_grid_of(*cfg);
    const auto profile =
        boundary_norm_profile(f->value, kind, r_grid, n_grid_of(*cfg), engine_of(*cfg));
    if (cfg->format == NCH_CSV) {
      *out = dup(io::grid_to_csv(profile.cells));
      return;
    }
    const auto series = radial_pairing(f->value, f->value, SpaceKind::of(kind), r_grid);
    json prediction = json::array();
    for (std::size_t i = 0; i < r_grid.size(); ++i)
      prediction.push_back({{"r", r_grid[i]}, {"value", series[i].real()}});
    *out = dup(json{{"cells", io::cells_to_json(profile.cells)},
                    {"sup_estimate", profile.sup_estimate},
                    {"sup_cell", io::cell_to_json(profile.sup_cell)},
                    {"corner", io::cell_to_json(profile.corner)},
                    {"norm_squared", profile.norm_squared},
                    {"series_prediction", std::move(prediction)}}
                   .dump());
  });
}

nch_status nch_radial_profiles(const nch_series* f, const nch_config* cfg, char** out) {
  return guarded([&] {
    require(f && cfg && out, "null argument");
    const auto prof =
        radial_boundary_profiles(f->value, r_grid_of(*cfg), n_grid_of(*cfg), engine_of(*cfg));
    *out = dup(json{{"r_grid", prof.r_grid},
                    {"phi", io::cells_to_json(prof.phi)},
                    {"psi", io::cells_to_json(prof.psi)},
                    {"phi_series", prof.phi_series},
                    {"psi_series", prof.psi_series}}
                   .dump());
  });
}

nch_status nch_freeness(const char* const* factors, size_t n_factors, const nch_config* cfg,
                        char** out_json) {
  return guarded([&] {
    require(cfg && out_json && (factors || n_factors == 0), "null argument");
    std::vector<FreenessFactor> parsed;
    for (size_t i = 0; i < n_factors; ++i) parsed.push_back(io::parse_freeness_factor(factors[i]));
    require(cfg->samples >= 2, "Monte Carlo needs at least 2 samples");
    const auto report = freeness_diagnostic(parsed, n_grid_of(*cfg), cfg->samples,
                                            SeededStream{cfg->seed, 0}, McOptions{cfg->workers, 512});
    json rows = json::array();
    for (const auto& row : report.rows) {
      rows.push_back({{"N", row.N},
                      {"estimate", io::estimate_to_json(row.estimate)},
                      {"abs_mean", std::abs(row.estimate.mean)},
                      {"envelope", row.envelope}});
    }
    *out_json = dup(json{{"rows", std::move(rows)},
                         {"envelope_log_slope", report.envelope_log_slope},
                         {"envelope_decreasing", report.envelope_decreasing},
                         {"magnitude_decreasing", report.magnitude_decreasing}}
                        .dump());
  });
}

nch_status nch_selftest(uint64_t seed, int corrupt_wg, unsigned workers,
                        nch_selftest_callback callback, void* user, int* all_passed,
                        char** out_json) {
  return guarded([&] {
    require(all_passed || out_json || callback, "no output requested");
    SelftestOptions options;
    options.seed = seed;
    options.corrupt_weingarten = corrupt_wg != 0;
    options.workers = workers;
    if (callback) {
      options.on_result = [&](const CriterionResult& r) {
        callback(r.id, r.name.c_str(), r.passed ? 1 : 0, format_result_line(r).c_str(), user);
      };
    }
    const auto results = run_acceptance(options);
    bool ok = true;
    json criteria = json::array();
    for (const auto& r : results) {
      ok = ok && r.passed;
      criteria.push_back({{"id", r.id},
                          {"name", r.name},
                          {"passed", r.passed},
                          {"detail", r.detail},
                          {"seconds", r.seconds},
                          {"budget_seconds", r.budget_seconds}});
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
    if (out_json) {
      *out_json = dup(json{{"seed", seed}, {"all_passed", ok}, {"criteria", std::move(criteria)}}.dump());
    }
  });
}

}  // extern "C"
