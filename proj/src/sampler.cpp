#include "ptree/sampler.hpp"

#include "ptree/error.hpp"
#include "ptree/interval.hpp"

namespace ptree {

BranchSampler::BranchSampler(EdgeFamily family, std::uint64_t seed) : family_(std::move(family)), rng_(seed) {}

Rational BranchSampler::draw_uniform() {
  Integer hi = rng_();
  Integer lo = rng_();
  Integer bits = (hi << 64) | lo;
  return Rational(bits, Integer(1) << 128);
}

NodePath BranchSampler::draw(std::size_t depth) {
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    Rational y = draw_uniform();
    try {
      return g_map(family_, y, depth);
    } catch (const Error& e) {
      if (e.code() != Errc::q_point) throw;
      ++redraws_;
    }
  }
  throw Error(Errc::sampler_stuck, "every draw hit an interval endpoint");
}

std::vector<NodePath> sample_branch(const EdgeFamily& family, std::uint64_t seed, std::size_t count,
                                    std::size_t depth) {
  BranchSampler sampler(family, seed);
  std::vector<NodePath> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.draw(depth));
  return out;
}

}  // namespace ptree
