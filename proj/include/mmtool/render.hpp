#pragma once

#include <string>

#include "mmtool/laurent.hpp"
#include "mmtool/ratfunc.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mmtool {

std::string multipoly_to_string(const MultiPoly& p);
std::string ratfunc_to_string(const RatFunc& f);
std::string laurent_to_string(const LaurentSeries& s);

// Expression JSON schema shared by all modules:
//   {"type":"ratfunc","vars":[...],"num":[{"c":"p/q","m":{"u0":2,"eps":1}}],"den":[...]}
// plus {"type":"log","coeff":<expr>,"arg":<expr>} and {"type":"sum","terms":[...]}
// for the log-bearing free energies.
nlohmann::json ratfunc_to_json(const RatFunc& f);
RatFunc ratfunc_from_json(const nlohmann::json& j);

}  // namespace mmtool
