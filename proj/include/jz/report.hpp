#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "jz/decompositions.hpp"
#include "jz/verify.hpp"
#include "jz/zeta.hpp"

namespace jz {

using json = nlohmann::ordered_json;

// Version tag carried by every JSON document and CSV header comment.
inline constexpr const char* kReportSchema = "jordanzeta.report/1";

// Element input: a JSON array of n coordinates, a JSON array of r rows (matrix
// families; off-diagonal entries are numbers, [re, im] or [a, b, c, d] in the
// units 1, i, j, k), or "(lambda|u_1,...,u_{n-1})" for Spin factors.
// Throws ParameterError with the character position on malformed input.
Vec parse_element(const Algebra& A, const std::string& text);
std::string format_element(const Algebra& A, const Vec& x);  // family-native literal

json to_json(const cplx& z);
json to_json(const Vec& v);
json to_json(const ZetaValue& v);
json to_json(const LaurentExpansion& L);
json to_json(const PoleReport& p);
json to_json(const CheckReport& r);
json to_json(const SpectralData& sd);

json make_document(const std::string& kind, const json& config, const json& results);
std::string dump_document(const json& doc);  // stable formatting, trailing newline

// One row per check; details flattened as key=value pairs joined by ';'.
std::string check_csv_header();
std::string check_csv_row(const CheckReport& r);
std::string csv_escape(const std::string& s);

}  // namespace jz
