#pragma once

#include "ptree/family.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace ptree {

// Draws branch prefixes by sending uniform 128-bit dyadic points through
// g_map. Not thread safe; use one sampler per thread.
class BranchSampler {
public:
  static constexpr int kMaxRedraws = 100;

  BranchSampler(EdgeFamily family, std::uint64_t seed);

  Rational draw_uniform();
  NodePath draw(std::size_t depth);
  std::size_t redraws() const noexcept { return redraws_; }

private:
  EdgeFamily family_;
  std::mt19937_64 rng_;
  std::size_t redraws_ = 0;
};

std::vector<NodePath> sample_branch(const EdgeFamily& family, std::uint64_t seed, std::size_t count,
                                    std::size_t depth);

}  // namespace ptree
