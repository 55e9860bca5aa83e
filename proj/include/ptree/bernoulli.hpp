#pragma once

#include "ptree/family.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ptree {

inline constexpr std::size_t kMaxTrials = 24;

// n dependent Bernoulli trials on the complete binary tree of height n.
// Successor 0 is success; the success probability of node t is stored at
// heap index 2^|t| - 1 + (t read as a binary number).
class DependentTrialTree {
public:
  DependentTrialTree(std::size_t n, std::vector<Rational> success_probs);

  // Reads the success probabilities of a family on the complete binary tree
  // of height n (n defaults to the height of an explicit tree). With
  // flip_success, successor 1 counts as success.
  static DependentTrialTree from_family(const EdgeFamily& family, std::optional<std::size_t> n = {},
                                        bool flip_success = false);
  static DependentTrialTree iid(std::size_t n, const Rational& p);
  // Success probabilities drawn from [min_p, 1] with small denominators.
  static DependentTrialTree random(std::size_t n, const Rational& min_p, std::uint64_t seed);

  std::size_t trials() const noexcept { return n_; }
  const Rational& success_prob(const NodePath& t) const;
  const std::vector<Rational>& success_probs() const noexcept { return probs_; }
  Rational min_success_prob() const;
  EdgeFamily family() const;

private:
  std::size_t n_;
  std::vector<Rational> probs_;
};

struct SuccessPmf {
  std::vector<Rational> probabilities;  // indexed by number of successes
  Rational cdf(long long z) const;
};

SuccessPmf success_pmf(const DependentTrialTree& tree);

Rational binomial_pmf(std::size_t n, const Rational& p, std::size_t k);
Rational binomial_cdf(std::size_t n, const Rational& p, long long z);

struct DominanceRow {
  std::size_t z = 0;
  Rational cdf_y;
  Rational cdf_binomial;
  Rational margin;  // cdf_binomial - cdf_y
  bool holds = true;
};

struct DominanceReport {
  std::vector<DominanceRow> rows;
  bool holds = true;
  std::optional<std::size_t> violated_z;
};

// Throws HypothesisViolated at the first node whose success probability is
// below p.
DominanceReport dominance_check(const DependentTrialTree& tree, const Rational& p);

// Product of the edge lengths of the unit-cube cell of a leaf: p_t for a
// success step, 1 - p_t for a failure step. Cross-checked against xi.
Rational cell_volume(const DependentTrialTree& tree, const NodePath& leaf);

}  // namespace ptree
