#pragma once

// Interchange formats.
//
//   series: {"m": 2, "terms": [{"word": [1,2], "re": 1.0, "im": 0.0}, ...]}
//   tuple:  {"m": 2, "n": 2, "matrices": [[[re,im], ...], ...]}   (row-major)
//   estimate: {"re": .., "im": .., "std_error": .., "samples": .., "seed": ..}

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "nchardy/hardy.hpp"

namespace nchardy::io {

using json = nlohmann::json;

NcSeries series_from_json(const json& j);
NcSeries parse_series(std::string_view text);
json series_to_json(const NcSeries& f);
std::string dump_series(const NcSeries& f);

MatrixTuple tuple_from_json(const json& j);
MatrixTuple parse_tuple(std::string_view text);
json tuple_to_json(const MatrixTuple& x);

json estimate_to_json(const MCEstimate& e);
json verdict_to_json(const UpsilonVerdict& v);

/// 17 significant digits, lowercase scientific ("%.16e").
std::string format_double(double x);

/// CSV with header param_r,param_N,value_re,value_im[,std_error]. The
/// std_error column is present iff some cell carries a Monte Carlo estimate;
/// cells with an exact value report it, with std_error 0.
std::string grid_to_csv(const std::vector<GridCell>& cells);

json cell_to_json(const GridCell& c);
json cells_to_json(const std::vector<GridCell>& cells);
json recovery_to_json(const RecoveryReport& r);

/// One factor of an alternating product: "k:pow[@coef],pow[@coef],..." is
/// sum_a coef_a U_k^pow_a (coef defaults to 1, negative powers mean U_k^*).
/// Example: "1:1,-1@0.5" is U_1 + 0.5 U_1^*.
FreenessFactor parse_freeness_factor(std::string_view text);

/// 1-based words as "1,2,1"; the empty word is "".
Word parse_word(std::string_view text);
std::string word_to_string(const Word& w);

}  // namespace nchardy::io
