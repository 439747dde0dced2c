#include "nchardy/io.hpp"

#include <cstdio>

#include "nchardy/error.hpp"

namespace nchardy::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::parse, what); }

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

int positive_int(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer() || j[key].get<long>() < 1) {
    parse_fail(std::string("field \"") + key + "\" must be a positive integer");
  }
  return j[key].get<int>();
}

double number_field(const json& term, const char* key, std::size_t index) {
  if (!term.contains(key)) return 0.0;
  if (!term[key].is_number()) {
    parse_fail("term " + std::to_string(index) + ": field \"" + key + "\" is not a number");
  }
  return term[key].get<double>();
}

}  // namespace

NcSeries series_from_json(const json& j) {
  const int m = positive_int(j, "m");
  if (!j.contains("terms") || !j["terms"].is_array()) parse_fail("field \"terms\" must be an array");
  NcSeries f(m);
  const auto& terms = j["terms"];
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (!t.is_object() || !t.contains("word") || !t["word"].is_array()) {
      parse_fail("term " + std::to_string(i) + ": missing \"word\" array");
    }
    std::vector<int> letters;
    for (const auto& l : t["word"]) {
      if (!l.is_number_integer() || l.get<long>() < 1 || l.get<long>() > m) {
        parse_fail("term " + std::to_string(i) + ": word letters must be integers in [1.." +
                   std::to_string(m) + "]");
      }
      letters.push_back(l.get<int>());
    }
    f.add(Word(std::span<const int>(letters)),
          Complex(number_field(t, "re", i), number_field(t, "im", i)));
  }
  return f;
}

NcSeries parse_series(std::string_view text) { return series_from_json(parse_text(text)); }

json series_to_json(const NcSeries& f) {
  json terms = json::array();
  for (const auto& [w, c] : f.terms()) {
    terms.push_back({{"word", w.to_vector()}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"m", f.alphabet()}, {"terms", std::move(terms)}};
}

std::string dump_series(const NcSeries& f) { return series_to_json(f).dump(); }

MatrixTuple tuple_from_json(const json& j) {
  const int m = positive_int(j, "m");
  const int n = positive_int(j, "n");
  if (!j.contains("matrices") || !j["matrices"].is_array() ||
      j["matrices"].size() != static_cast<std::size_t>(m)) {
    parse_fail("field \"matrices\" must hold exactly m matrices");
  }
  std::vector<Matrix> mats;
  for (std::size_t k = 0; k < j["matrices"].size(); ++k) {
    const auto& entries = j["matrices"][k];
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n) * n) {
      parse_fail("matrix " + std::to_string(k) + " must have n*n entries");
    }
    Matrix a(n, n);
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto& z = entries[e];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        parse_fail("matrix " + std::to_string(k) + " entry " + std::to_string(e) +
                   " must be [re, im]");
      }
      a(static_cast<Eigen::Index>(e) / n, static_cast<Eigen::Index>(e) % n) =
          Complex(z[0].get<double>(), z[1].get<double>());
    }
    mats.push_back(std::move(a));
  }
  return MatrixTuple(m, std::move(mats));
}

MatrixTuple parse_tuple(std::string_view text) { return tuple_from_json(parse_text(text)); }

json tuple_to_json(const MatrixTuple& x) {
  json mats = json::array();
  for (const auto& a : x.matrices()) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index k = 0; k < a.cols(); ++k)
        entries.push_back({a(i, k).real(), a(i, k).imag()});
    mats.push_back(std::move(entries));
  }
  return {{"m", x.alphabet()}, {"n", x.dim()}, {"matrices", std::move(mats)}};
}

json estimate_to_json(const MCEstimate& e) {
  return {{"re", e.mean.real()},
          {"im", e.mean.imag()},
          {"std_error", e.std_error},
          {"samples", e.samples},
          {"seed", e.seed}};
}

json verdict_to_json(const UpsilonVerdict& v) {
  json out{{"status", to_string(v.status)},
           {"checked_degree", v.checked_degree},
           {"theta", v.theta},
           {"partial_sum_norms", v.partial_sum_norms}};
  if (v.status == UpsilonStatus::converged_with_bound) out["bound"] = v.bound;
  if (v.status == UpsilonStatus::diverged_at_degree) out["degree"] = v.diverged_degree;
  return out;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string grid_to_csv(const std::vector<GridCell>& cells) {
  bool any_mc = false;
  for (const auto& c : cells) any_mc = any_mc || c.mc.has_value();
  std::string out = "param_r,param_N,value_re,value_im";
  if (any_mc) out += ",std_error";
  out += '\n';
  for (const auto& c : cells) {
    const Complex v = c.value();
    out += format_double(c.r) + ',' + std::to_string(c.N) + ',' + format_double(v.real()) + ',' +
           format_double(v.imag());
    if (any_mc) out += ',' + format_double(c.exact ? 0.0 : (c.mc ? c.mc->std_error : 0.0));
    out += '\n';
  }
  return out;
}

json cell_to_json(const GridCell& c) {
  json out{{"r", c.r}, {"N", c.N}};
  if (c.exact) out["exact"] = {{"re", c.exact->real()}, {"im", c.exact->imag()}};
  if (c.mc) out["mc"] = estimate_to_json(*c.mc);
  if (auto d = c.delta_in_std_errors()) out["delta_std_errors"] = *d;
  return out;
}

json cells_to_json(const std::vector<GridCell>& cells) {
  json out = json::array();
  for (const auto& c : cells) out.push_back(cell_to_json(c));
  return out;
}

json recovery_to_json(const RecoveryReport& r) {
  json trend = json::array();
  for (const auto& t : r.trend) trend.push_back({{"re", t.real()}, {"im", t.imag()}});
  return {{"word", r.word.to_vector()},
          {"r", r.r},
          {"cells", cells_to_json(r.cells)},
          {"recovered", {{"re", r.recovered.real()}, {"im", r.recovered.imag()}}},
          {"trend", std::move(trend)}};
}

namespace {

double parse_number(const std::string& token, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used == token.size()) return v;
  } catch (const std::exception&) {
  }
  parse_fail("bad number \"" + token + "\" in " + context);
}

int parse_integer(const std::string& token, const std::string& context) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used == token.size()) return v;
  } catch (const std::exception&) {
  }
  parse_fail("bad integer \"" + token + "\" in " + context);
}

}  // namespace

FreenessFactor parse_freeness_factor(std::string_view text) {
  const std::string s(text);
  const auto colon = s.find(':');
  if (colon == std::string::npos) parse_fail("factor \"" + s + "\" lacks \"k:\"");
  FreenessFactor f;
  f.ensemble = parse_integer(s.substr(0, colon), "factor \"" + s + "\"");
  std::string rest = s.substr(colon + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    auto comma = rest.find(',', start);
    if (comma == std::string::npos) comma = rest.size();
    const std::string term = rest.substr(start, comma - start);
    const auto at = term.find('@');
    const int power = parse_integer(term.substr(0, at), "factor \"" + s + "\"");
    const double coef =
        at == std::string::npos ? 1.0 : parse_number(term.substr(at + 1), "factor \"" + s + "\"");
    f.powers[power] += coef;
    start = comma + 1;
  }
  return f;
}

Word parse_word(std::string_view text) {
  std::vector<int> letters;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    try {
      std::size_t used = 0;
      const int v = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      letters.push_back(v);
    } catch (const std::exception&) {
      parse_fail("bad word letter \"" + token + "\"");
    }
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '[' || ch == ']')
      flush();
    else
      token += ch;
  }
  flush();
  for (int l : letters)
    if (l < 1) parse_fail("word letters are 1-based");
  return Word(std::span<const int>(letters));
}

std::string word_to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(w[i]);
  }
  return out;
}

}  // namespace nchardy::io
