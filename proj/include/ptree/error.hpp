#pragma once

#include "ptree/node_path.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptree {

enum class Errc {
  invalid_argument,
  cyclic_input,
  multiple_roots,
  depth_budget_exceeded,
  infinite_level,
  unknown_node,
  not_a_front,
  node_not_below_front,
  malformed_pair,
  precondition_front_mismatch,
  q_point,
  malformed_clopen,
  not_a_subtree,
  requires_explicit_finite_tree,
  sampler_stuck,
  encoding_mismatch,
  too_deep,
  hypothesis_violated,
  not_a_leaf,
  syntax_error,
  validation_error,
  unknown_generator,
  internal_inconsistency,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what);
  Error(Errc code, const std::string& what, NodePath node);

  Errc code() const noexcept { return code_; }
  const std::optional<NodePath>& node() const noexcept { return node_; }

  // Set for syntax errors in spec documents.
  std::optional<std::size_t> line;

private:
  Errc code_;
  std::optional<NodePath> node_;
};

}  // namespace ptree
