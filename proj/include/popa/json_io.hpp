#pragma once

// JSON schemas for algebras, elements, solutions and reports. Index lists in
// JSON are 1-based; the library is 0-based.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "popa/solutions.hpp"
#include "popa/special.hpp"
#include "popa/structure.hpp"
#include "popa/tilting.hpp"

namespace popa::json_io {

using Json = nlohmann::ordered_json;

/// Throws InvalidInput naming the text position on malformed JSON.
Json parse(std::string_view text);

/// Two-space indented, doubles at 17 significant digits, non-finite as null,
/// newline-terminated.
std::string dump(const Json& j);

// {"kind": "Hadamard", "dim": d} | {"kind": "Complex"} | {"kind": "GridCInterval", "grid": [...]}
Json to_json(const Algebra& a);
Algebra algebra_from_json(const Json& j);

// {"algebra": ..., "coords": [...]}. Bare coordinate arrays are read in `algebra`.
Json to_json(const Element& e);
Json coords_json(const Element& e);
Element element_from_json(const Json& j, const Algebra& algebra, std::string_view field);

Json to_json(const GsSolution& sol);
/// {"variant": ..., "algebra": ..., variant parameters}. The algebra defaults
/// to Hadamard R^d with d inferred from the parameters.
GsSolution solution_from_json(const Json& j);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, std::string_view field);

Json to_json(const PartitionSpec& p);
Json to_json(const StructureReport& r);
Json to_json(const TwoDClassification& c);
Json to_json(const GoldieResidualReport& r);
Json to_json(const TiltResult& r);
Json to_json(const StSolution& s);
Json to_json(const std::vector<StSolution>& roots);
Json to_json(const WjDiagnostics& d);

/// j[name], or InvalidInput "missing field 'name'".
const Json& require(const Json& j, std::string_view name);
double number(const Json& j, std::string_view name);

}  // namespace popa::json_io
