#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "jetflow/linalg.hpp"
#include "jetflow/poly.hpp"

namespace jetflow::cli {

using json = nlohmann::json;

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | base ('^' NAT)?
//   base   := NUM | VAR | '(' expr ')'
//   NUM    := INT ('/' POSINT)? | decimal with optional exponent
// Unary minus binds looser than '^', so "-x^2" is -(x^2), which is what the
// printer emits. Errors are ErrorKind::Parse with the byte offset in the detail.
MultiPoly parse_poly(std::string_view text, const std::vector<std::string>& vars,
                     ScalarMode mode = ScalarMode::exact);
// Comma-separated coordinates, optionally wrapped in one pair of parentheses.
PolyMap parse_map(std::string_view text, const std::vector<std::string>& vars,
                  ScalarMode mode = ScalarMode::exact);
// Polynomials separated by `sep`.
std::vector<MultiPoly> parse_list(std::string_view text, const std::vector<std::string>& vars, char sep = ';',
                                  ScalarMode mode = ScalarMode::exact);
// Rows separated by ';', entries by ','.
Matrix parse_matrix(std::string_view text, ScalarMode mode = ScalarMode::exact);
// Numeric literal as accepted by the grammar, e.g. "3", "-2/7", "1.5e-3".
Scalar parse_number(std::string_view text, ScalarMode mode = ScalarMode::exact);

// Variable names for texts written without --vars: x1..xN when indexed names
// occur (N the largest index), otherwise the default names for the smallest
// n covering the x, y, z that occur. At least `minimum` names.
std::vector<std::string> infer_vars(const std::vector<std::string>& texts, std::size_t minimum = 1);

// Polynomial encoding: list of {"exps": [...], "num": str, "den": str}.
json to_json(const MultiPoly& p);
json to_json(const PolyMap& F);
json to_json(const Matrix& m);
MultiPoly poly_from_json(const json& j, std::size_t nvars, ScalarMode mode = ScalarMode::exact);
PolyMap map_from_json(const json& j, std::size_t nvars, ScalarMode mode = ScalarMode::exact);

enum ExitCode { ok = 0, usage = 1, parse_error = 2, math_error = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace jetflow::cli
