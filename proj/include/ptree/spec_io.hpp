#pragma once

#include "ptree/family.hpp"

#include <string>
#include <string_view>

namespace ptree {

// Tree-spec documents (JSON). Explicit form:
//   {"version": 1, "representation": "explicit",
//    "nodes": {"": {"arity": 2, "probs": ["1/2", "1/2"]}, "0": {"arity": 0}, "1": {"arity": 0}}}
// A node may list "children" (successor indices) instead of using 0..arity-1.
// Generator form:
//   {"version": 1, "representation": "generator", "generator": "uniform_binary", "depth_budget": 16}
// with generator one of uniform_binary, geometric_omega (optional "ratio"), dirac(k).
EdgeFamily parse_spec(std::string_view text, std::size_t default_depth_budget = kDefaultDepthBudget);
std::string serialize_spec(const EdgeFamily& family);
EdgeFamily load_spec_file(const std::string& path, std::size_t default_depth_budget = kDefaultDepthBudget);

}  // namespace ptree
