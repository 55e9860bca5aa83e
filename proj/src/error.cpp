#include "ptree/error.hpp"

namespace ptree {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::cyclic_input: return "CyclicInput";
    case Errc::multiple_roots: return "MultipleRoots";
    case Errc::depth_budget_exceeded: return "DepthBudgetExceeded";
    case Errc::infinite_level: return "InfiniteLevel";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::not_a_front: return "NotAFront";
    case Errc::node_not_below_front: return "NodeNotBelowFront";
    case Errc::malformed_pair: return "MalformedPair";
    case Errc::precondition_front_mismatch: return "PreconditionFrontMismatch";
    case Errc::q_point: return "QPointError";
    case Errc::malformed_clopen: return "MalformedClopen";
    case Errc::not_a_subtree: return "NotASubtree";
    case Errc::requires_explicit_finite_tree: return "RequiresExplicitFiniteTree";
    case Errc::sampler_stuck: return "SamplerStuck";
    case Errc::encoding_mismatch: return "EncodingMismatch";
    case Errc::too_deep: return "TooDeep";
    case Errc::hypothesis_violated: return "HypothesisViolated";
    case Errc::not_a_leaf: return "NotALeaf";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::validation_error: return "ValidationError";
    case Errc::unknown_generator: return "UnknownGenerator";
    case Errc::internal_inconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

Error::Error(Errc code, const std::string& what, NodePath node)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what + " at " + node.display()),
      code_(code),
      node_(std::move(node)) {}

}  // namespace ptree
