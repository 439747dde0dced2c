// nchardy command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nchardy/nchardy.h"

namespace {

using json = nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kAcceptance = 3 };

struct Failure {
  int code;
  std::string message;
};

struct Options {
  std::string space = "polydisc";
  int m = 0;
  std::vector<int> n_grid{4};
  std::vector<double> r_grid{1.0};
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string engine = "exact";
  std::string out;
  std::string format = "json";
  unsigned workers = 0;
};

void check(nch_status s) {
  if (s == NCH_OK) return;
  throw Failure{nch_status_is_usage(s) ? kUsage : kNumeric,
                std::string(nch_status_name(s)) + ": " + nch_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  nch_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kUsage, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SeriesDeleter {
  void operator()(nch_series* s) const { nch_series_free(s); }
};
struct TupleDeleter {
  void operator()(nch_tuple* t) const { nch_tuple_free(t); }
};
using SeriesPtr = std::unique_ptr<nch_series, SeriesDeleter>;
using TuplePtr = std::unique_ptr<nch_tuple, TupleDeleter>;

SeriesPtr load_series(const std::string& path) {
  nch_series* s = nullptr;
  const std::string text = read_file(path);
  const nch_status st = nch_series_parse(text.c_str(), &s);
  if (st != NCH_OK) throw Failure{kUsage, path + ": " + nch_last_error()};
  return SeriesPtr(s);
}

TuplePtr load_tuple(const std::string& path) {
  nch_tuple* t = nullptr;
  const std::string text = read_file(path);
  const nch_status st = nch_tuple_parse(text.c_str(), &t);
  if (st != NCH_OK) throw Failure{kUsage, path + ": " + nch_last_error()};
  return TuplePtr(t);
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Failure{kUsage, "bad integer list \"" + text + "\""};
    }
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Failure{kUsage, "bad number list \"" + text + "\""};
    }
  }
  return out;
}

nch_geometry geometry_of(const std::string& s) {
  if (s == "polydisc") return NCH_POLYDISC;
  if (s == "ball") return NCH_BALL;
  return NCH_BALL_ROW;
}

nch_engine engine_of(const std::string& s) {
  if (s == "mc") return NCH_MC;
  if (s == "both") return NCH_BOTH;
  return NCH_EXACT;
}

nch_config config_of(const Options& o) {
  nch_config cfg;
  nch_config_init(&cfg);
  cfg.geometry = geometry_of(o.space);
  cfg.m = o.m;
  cfg.n_grid = o.n_grid.data();
  cfg.n_count = o.n_grid.size();
  cfg.r_grid = o.r_grid.data();
  cfg.r_count = o.r_grid.size();
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.engine = engine_of(o.engine);
  cfg.workers = o.workers;
  cfg.format = o.format == "csv" ? NCH_CSV : NCH_JSON;
  return cfg;
}

json config_echo(const std::string& command, const Options& o) {
  return {{"command", command}, {"space", o.space},   {"m", o.m},
          {"N", o.n_grid},      {"r", o.r_grid},      {"samples", o.samples},
          {"seed", o.seed},     {"engine", o.engine}, {"format", o.format}};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw Failure{kUsage, "cannot write " + o.out};
  file << text;
  if (!text.empty() && text.back() != '\n') file << '\n';
}

/// JSON reports carry the configuration; CSV bodies are the bare grid.
void emit_report(const std::string& command, const Options& o, const std::string& body) {
  if (o.format == "csv") {
    emit(o, body);
    return;
  }
  json report{{"config", config_echo(command, o)}, {"result", json::parse(body)}};
  emit(o, report.dump(2));
}

void require_series_alphabet(const Options& o, const nch_series* f) {
  if (o.m > 0 && o.m != nch_series_alphabet(f)) {
    throw Failure{kUsage, "--m " + std::to_string(o.m) + " does not match the series alphabet " +
                              std::to_string(nch_series_alphabet(f))};
  }
}

std::vector<double> parse_vector(const std::string& text, int dim, const char* name) {
  const auto v = parse_doubles(text);
  if (static_cast<int>(v.size()) != 2 * dim) {
    throw Failure{kUsage, std::string(name) + " needs " + std::to_string(2 * dim) +
                              " numbers (interleaved re,im)"};
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy spaces of noncommutative functions: exact Weingarten integration and "
               "Haar Monte Carlo"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  o.seed = nch_default_seed();
  app.add_option("--space", o.space, "Boundary / space")
      ->check(CLI::IsMember({"polydisc", "ball", "ball-row"}));
  app.add_option("--m", o.m, "Alphabet size (default: from the input)")->check(CLI::PositiveNumber);
  app.add_option("--N", o.n_grid, "Matrix level(s)")->check(CLI::PositiveNumber);
  app.add_option("--r", o.r_grid, "Radius/radii")->check(CLI::NonNegativeNumber);
  app.add_option("--samples", o.samples, "Monte Carlo samples");
  app.add_option("--seed", o.seed, "Seed (default: NC_HARDY_SEED or built-in)");
  app.add_option("--engine", o.engine, "Integration engine")
      ->check(CLI::IsMember({"exact", "mc", "both"}));
  app.add_option("--out", o.out, "Output file (default: stdout)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", o.workers, "Monte Carlo worker threads (0: all cores)");

  int wg_n = 2;
  auto* wg = app.add_subcommand("wg", "Weingarten values by cycle type");
  wg->add_option("--n", wg_n, "Permutation size")->required();

  std::vector<std::string> ups, conjs;
  std::string moment_w, moment_v;
  auto* moment = app.add_subcommand("moment", "Exact Haar moments");
  moment->add_option("--up", ups, "Entry i,j of U (repeatable, 1-based)");
  moment->add_option("--conj", conjs, "Entry i,j of conj(U) (repeatable, 1-based)");
  moment->add_option("--w", moment_w, "Word w for int Tr((X^w)^* X^v)");
  moment->add_option("--v", moment_v, "Word v for int Tr((X^w)^* X^v)");

  std::string f_path, g_path;
  auto* pairing = app.add_subcommand("pairing", "Boundary integrals (1/N) Tr(g(rX)^* f(rX))");
  pairing->add_option("f", f_path, "Series JSON")->required();
  pairing->add_option("g", g_path, "Series JSON (default: f)");

  std::string word;
  auto* recover = app.add_subcommand("recover", "Recover a coefficient from boundary integrals");
  recover->add_option("f", f_path, "Series JSON")->required();
  recover->add_option("--word", word, "Word, e.g. 1,2 (empty for the constant term)")->required();

  auto* inner = app.add_subcommand("inner", "H^2 inner product <f, g>");
  inner->add_option("f", f_path, "Series JSON")->required();
  inner->add_option("g", g_path, "Series JSON")->required();

  std::string tuple_path, tuple2_path;
  double p = 1.0;
  int max_degree = 24;
  double threshold = 1.0;
  auto* upsilon = app.add_subcommand("upsilon", "Membership of a matrix tuple in Upsilon_p");
  upsilon->add_option("tuple", tuple_path, "Tuple JSON")->required();
  upsilon->add_option("--p", p, "Weight p")->check(CLI::PositiveNumber);
  upsilon->add_option("--max-degree", max_degree, "Largest degree examined");
  upsilon->add_option("--threshold", threshold, "Divergence threshold on stratum norms");

  int kernel_degree = 12;
  std::string e1_text, e2_text, kernel_series;
  auto* kernel = app.add_subcommand("kernel", "Truncated kernel K_p(X, Y); optional reproducing check");
  kernel->add_option("x", tuple_path, "Tuple JSON X")->required();
  kernel->add_option("y", tuple2_path, "Tuple JSON Y (default: X)");
  kernel->add_option("--p", p, "Weight p")->check(CLI::PositiveNumber);
  kernel->add_option("--L", kernel_degree, "Truncation degree");
  kernel->add_option("--series", kernel_series, "Series JSON for the reproducing check at Y");
  kernel->add_option("--e1", e1_text, "Vector e1 as re,im,re,im,...");
  kernel->add_option("--e2", e2_text, "Vector e2 as re,im,re,im,...");

  bool radial = false;
  auto* profile = app.add_subcommand("profile", "Boundary norm profile and S(f) grid estimate");
  profile->add_option("f", f_path, "Series JSON")->required();
  profile->add_flag("--radial", radial, "Polydisc and ball radial profiles with series predictions");

  std::vector<std::string> factors;
  auto* freeness = app.add_subcommand("freeness", "Alternating-product freeness diagnostic");
  freeness->add_option("--factor", factors, "Factor k:pow[@coef],pow[@coef],... (in order)")
      ->required();

  bool corrupt = false;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_flag("--corrupt-wg", corrupt, "Negative control: perturb a cached Weingarten value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (o.samples < 2 && o.engine != "exact") throw Failure{kUsage, "--samples must be >= 2"};
    const nch_config cfg = config_of(o);

    if (*wg) {
      json rows = json::array();
      for (int N : o.n_grid) {
        char* out = nullptr;
        check(nch_wg_table(wg_n, N, &out));
        rows.push_back(json::parse(take(out)));
      }
      if (o.format == "csv") {
        std::string csv = "n,N,cycle_type,exact,value\n";
        char buf[64];
        for (const auto& t : rows)
          for (const auto& r : t["rows"]) {
            std::snprintf(buf, sizeof buf, "%.16e", r["value"].get<double>());
            csv += std::to_string(wg_n) + ',' + std::to_string(t["N"].get<int>()) + ",\"" +
                   r["cycle_type"].get<std::string>() + "\"," + r["exact"].get<std::string>() +
                   ',' + buf + '\n';
          }
        emit(o, csv);
      } else {
        emit(o, json{{"config", config_echo("wg", o)}, {"result", rows}}.dump(2));
      }
    } else if (*moment) {
      json results = json::array();
      for (int N : o.n_grid) {
        char* out = nullptr;
        if (!moment_w.empty() || !moment_v.empty()) {
          const auto w = parse_ints(moment_w), v = parse_ints(moment_v);
          int m = o.m;
          for (int l : w) m = std::max(m, l);
          for (int l : v) m = std::max(m, l);
          check(nch_pairing_word(w.data(), w.size(), v.data(), v.size(), geometry_of(o.space),
                                 std::max(m, 1), N, &out));
        } else {
          std::vector<int> a, b;
          for (const auto& s : ups) {
            const auto ij = parse_ints(s);
            if (ij.size() != 2) throw Failure{kUsage, "--up expects i,j"};
            a.insert(a.end(), ij.begin(), ij.end());
          }
          for (const auto& s : conjs) {
            const auto ij = parse_ints(s);
            if (ij.size() != 2) throw Failure{kUsage, "--conj expects i,j"};
            b.insert(b.end(), ij.begin(), ij.end());
          }
          check(nch_entry_moment(a.data(), a.size() / 2, b.data(), b.size() / 2, N, &out));
        }
        results.push_back(json::parse(take(out)));
      }
      emit(o, json{{"config", config_echo("moment", o)}, {"result", results}}.dump(2));
    } else if (*pairing) {
      auto f = load_series(f_path);
      auto g = g_path.empty() ? load_series(f_path) : load_series(g_path);
      require_series_alphabet(o, f.get());
      char* out = nullptr;
      check(nch_pairing(f.get(), g.get(), &cfg, &out));
      emit_report("pairing", o, take(out));
    } else if (*recover) {
      auto f = load_series(f_path);
      require_series_alphabet(o, f.get());
      const auto w = parse_ints(word);
      char* out = nullptr;
      check(nch_recover(f.get(), w.data(), w.size(), o.r_grid.front(), &cfg, &out));
      emit_report("recover", o, take(out));
    } else if (*inner) {
      auto f = load_series(f_path);
      auto g = load_series(g_path);
      double re = 0, im = 0;
      check(nch_inner(f.get(), g.get(), geometry_of(o.space), &re, &im));
      emit(o, json{{"config", config_echo("inner", o)}, {"result", {{"re", re}, {"im", im}}}}.dump(2));
    } else if (*upsilon) {
      auto x = load_tuple(tuple_path);
      char* out = nullptr;
      check(nch_upsilon(x.get(), p, max_degree, threshold, &out));
      emit(o, json::parse(take(out)).dump(2));
    } else if (*kernel) {
      auto x = load_tuple(tuple_path);
      auto y = tuple2_path.empty() ? load_tuple(tuple_path) : load_tuple(tuple2_path);
      char* out = nullptr;
      check(nch_kernel(x.get(), y.get(), p, kernel_degree, &out));
      json result{{"kernel", json::parse(take(out))}};
      if (!kernel_series.empty()) {
        auto f = load_series(kernel_series);
        const int dim = nch_tuple_dim(y.get());
        std::vector<double> e1(2 * dim, 0.0), e2(2 * dim, 0.0);
        e1[0] = e2[0] = 1.0;
        if (!e1_text.empty()) e1 = parse_vector(e1_text, dim, "--e1");
        if (!e2_text.empty()) e2 = parse_vector(e2_text, dim, "--e2");
        check(nch_reproduce(f.get(), y.get(), e1.data(), e2.data(), p, &out));
        result["reproduce"] = json::parse(take(out));
      }
      emit(o, result.dump(2));
    } else if (*profile) {
      auto f = load_series(f_path);
      require_series_alphabet(o, f.get());
      char* out = nullptr;
      if (radial) {
        if (o.format == "csv") throw Failure{kUsage, "--radial reports are JSON only"};
        check(nch_radial_profiles(f.get(), &cfg, &out));
      } else {
        check(nch_profile(f.get(), &cfg, &out));
      }
      emit_report("profile", o, take(out));
    } else if (*freeness) {
      std::vector<const char*> specs;
      for (const auto& s : factors) specs.push_back(s.c_str());
      char* out = nullptr;
      check(nch_freeness(specs.data(), specs.size(), &cfg, &out));
      emit(o, json{{"config", config_echo("freeness", o)}, {"result", json::parse(take(out))}}.dump(2));
    } else if (*selftest) {
      int all = 0;
      char* out = nullptr;
      check(nch_selftest(
          o.seed, corrupt ? 1 : 0, o.workers,
          [](int, const char*, int, const char* line, void*) {
            std::cout << line << std::endl;
          },
          nullptr, &all, &out));
      const std::string report = take(out);
      if (!o.out.empty()) emit(o, json::parse(report).dump(2));
      std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << " (seed " << o.seed << ")"
                << std::endl;
      return all ? kOk : kAcceptance;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << std::endl;
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kUsage;
  }
  return kOk;
}
