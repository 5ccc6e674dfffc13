#pragma once

#include "mpecv/mpec.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mpecv {

inline constexpr int problem_format_version = 1;

/// Expression nodes: {"const": "3/2"}, {"var": 0}, {"add": [...]}, {"mul": [...]},
/// {"neg": e}, {"div": [n, d]}, {"abs": e}, {"max": [...]}, {"min": [...]},
/// {"pow": {"base": e, "exp": 3}}, {"exp": e}. Throws ValidationError.
Expr expr_from_json(const nlohmann::json& j);
nlohmann::ordered_json expr_to_json(const Expr& e);

/// Throws ParseError (with line and column) or ValidationError.
MPECProblem parse_problem(std::string_view text);
MPECProblem load_problem(const std::filesystem::path& path);

/// Canonical form; parse_problem(serialize_problem(p)) reproduces p.
std::string serialize_problem(const MPECProblem& p);

} // namespace mpecv
