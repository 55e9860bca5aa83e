#include "ptree/bernoulli.hpp"

#include "ptree/error.hpp"

#include <algorithm>
#include <random>

namespace ptree {

namespace {

std::size_t heap_index(const NodePath& t) {
  std::size_t idx = 0;
  for (auto b : t.indices()) idx = idx * 2 + b;
  return (std::size_t{1} << t.size()) - 1 + idx;
}

NodePath heap_node(std::size_t index) {
  std::size_t len = 0;
  while ((std::size_t{2} << len) - 1 <= index) ++len;
  std::size_t offset = index - ((std::size_t{1} << len) - 1);
  std::vector<std::uint64_t> v(len);
  for (std::size_t i = 0; i < len; ++i) v[len - 1 - i] = (offset >> i) & 1;
  return NodePath(std::move(v));
}

}  // namespace

DependentTrialTree::DependentTrialTree(std::size_t n, std::vector<Rational> success_probs)
    : n_(n), probs_(std::move(success_probs)) {
  if (n_ > kMaxTrials) throw Error(Errc::too_deep, "at most " + std::to_string(kMaxTrials) + " trials");
  if (probs_.size() != (std::size_t{1} << n_) - 1)
    throw Error(Errc::invalid_argument, "expected " + std::to_string((std::size_t{1} << n_) - 1) +
                                            " success probabilities, got " + std::to_string(probs_.size()));
  for (std::size_t i = 0; i < probs_.size(); ++i)
    if (probs_[i] < 0 || probs_[i] > 1)
      throw Error(Errc::validation_error, "success probability outside [0, 1]", heap_node(i));
}

DependentTrialTree DependentTrialTree::from_family(const EdgeFamily& family, std::optional<std::size_t> n,
                                                   bool flip_success) {
  std::size_t height = n ? *n : family.tree().max_depth();
  if (height > kMaxTrials) throw Error(Errc::too_deep, "at most " + std::to_string(kMaxTrials) + " trials");
  family.tree().check_depth(height);
  std::vector<Rational> probs((std::size_t{1} << height) - 1);
  for_each_node(family.tree(), height, [&](const NodePath& t, const ChildSet& kids) {
    if (t.size() == height) {
      if (n && family.tree().is_explicit() && !kids.empty())
        throw Error(Errc::invalid_argument, "tree continues below the last trial", t);
      if (!family.tree().is_explicit() || kids.empty()) return;
    }
    if (kids.is_omega() || kids != ChildSet::range(2))
      throw Error(Errc::invalid_argument, "every trial needs exactly the successors 0 and 1", t);
    auto d = family.at_member(t);
    probs[heap_index(t)] = d->mass(flip_success ? 1 : 0);
  });
  return DependentTrialTree(height, std::move(probs));
}

DependentTrialTree DependentTrialTree::iid(std::size_t n, const Rational& p) {
  if (n > kMaxTrials) throw Error(Errc::too_deep, "at most " + std::to_string(kMaxTrials) + " trials");
  return DependentTrialTree(n, std::vector<Rational>((std::size_t{1} << n) - 1, p));
}

DependentTrialTree DependentTrialTree::random(std::size_t n, const Rational& min_p, std::uint64_t seed) {
  if (n > kMaxTrials) throw Error(Errc::too_deep, "at most " + std::to_string(kMaxTrials) + " trials");
  if (min_p < 0 || min_p > 1) throw Error(Errc::invalid_argument, "minimum probability outside [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> den(1, 12);
  std::vector<Rational> probs((std::size_t{1} << n) - 1);
  for (auto& p : probs) {
    int q = den(rng);
    int k = std::uniform_int_distribution<int>(0, q)(rng);
    p = min_p + (1 - min_p) * Rational(k, q);
  }
  return DependentTrialTree(n, std::move(probs));
}

const Rational& DependentTrialTree::success_prob(const NodePath& t) const {
  if (t.size() >= n_) throw Error(Errc::unknown_node, "not a trial node", t);
  for (auto b : t.indices())
    if (b > 1) throw Error(Errc::unknown_node, "not a trial node", t);
  return probs_[heap_index(t)];
}

Rational DependentTrialTree::min_success_prob() const {
  if (probs_.empty()) return 1;
  return *std::min_element(probs_.begin(), probs_.end());
}

EdgeFamily DependentTrialTree::family() const {
  auto probs = std::make_shared<const std::vector<Rational>>(probs_);
  std::size_t n = n_;
  return EdgeFamily::generated(
      [probs, n](const NodePath& t) -> std::optional<Distribution> {
        if (t.size() >= n) return std::nullopt;
        const Rational& p = (*probs)[heap_index(t)];
        return Distribution::table(std::vector<Rational>{p, 1 - p});
      },
      n_, GeneratorInfo{"dependent_trials", std::nullopt});
}

Rational SuccessPmf::cdf(long long z) const {
  Rational s = 0;
  for (long long k = 0; k <= z && k < static_cast<long long>(probabilities.size()); ++k) s += probabilities[k];
  return s;
}

SuccessPmf success_pmf(const DependentTrialTree& tree) {
  std::size_t n = tree.trials();
  SuccessPmf pmf;
  pmf.probabilities.assign(n + 1, Rational(0));
  const auto& probs = tree.success_probs();
  // Depth-first over leaves, carrying the path mass and the success count.
  struct Frame {
    std::size_t index;
    std::size_t depth;
    std::size_t successes;
    Rational mass;
  };
  std::vector<Frame> stack{{0, 0, 0, Rational(1)}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.mass == 0) continue;
    if (f.depth == n) {
      pmf.probabilities[f.successes] += f.mass;
      continue;
    }
    const Rational& p = probs[f.index];
    stack.push_back({2 * f.index + 2, f.depth + 1, f.successes, f.mass * (1 - p)});
    stack.push_back({2 * f.index + 1, f.depth + 1, f.successes + 1, f.mass * p});
  }
  return pmf;
}

Rational binomial_pmf(std::size_t n, const Rational& p, std::size_t k) {
  if (k > n) return 0;
  Integer c = 1;
  for (std::size_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return Rational(c) * rational_pow(p, k) * rational_pow(1 - p, n - k);
}

Rational binomial_cdf(std::size_t n, const Rational& p, long long z) {
  if (z < 0) return 0;
  if (z >= static_cast<long long>(n)) return 1;
  Rational s = 0;
  for (long long k = 0; k <= z; ++k) s += binomial_pmf(n, p, static_cast<std::size_t>(k));
  return s;
}

DominanceReport dominance_check(const DependentTrialTree& tree, const Rational& p) {
  if (p < 0 || p > 1) throw Error(Errc::invalid_argument, "p outside [0, 1]");
  const auto& probs = tree.success_probs();
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (probs[i] < p)
      throw Error(Errc::hypothesis_violated,
                  "success probability " + format_rational(probs[i]) + " is below " + format_rational(p), heap_node(i));
  SuccessPmf pmf = success_pmf(tree);
  DominanceReport r;
  Rational running = 0;
  for (std::size_t z = 0; z <= tree.trials(); ++z) {
    running += pmf.probabilities[z];
    DominanceRow row;
    row.z = z;
    row.cdf_y = running;
    row.cdf_binomial = binomial_cdf(tree.trials(), p, static_cast<long long>(z));
    row.margin = row.cdf_binomial - row.cdf_y;
    row.holds = row.cdf_y <= row.cdf_binomial;
    if (!row.holds && r.holds) {
      r.holds = false;
      r.violated_z = z;
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

Rational cell_volume(const DependentTrialTree& tree, const NodePath& leaf) {
  if (leaf.size() != tree.trials()) throw Error(Errc::not_a_leaf, "leaves have length " + std::to_string(tree.trials()), leaf);
  for (auto b : leaf.indices())
    if (b > 1) throw Error(Errc::not_a_leaf, "not a node of the trial tree", leaf);
  // The cell of a leaf is the box whose k-th side is [0, p) on success and
  // [p, 1) on failure, with p the success probability at the k-th prefix.
  Rational volume = 1;
  for (std::size_t k = 0; k < leaf.size(); ++k) {
    const Rational& p = tree.success_prob(leaf.prefix(k));
    Rational lo = leaf[k] == 0 ? Rational(0) : p;
    Rational hi = leaf[k] == 0 ? p : Rational(1);
    volume *= hi - lo;
  }
  Rational mass = xi(tree.family(), leaf);
  if (volume != mass)
    throw Error(Errc::internal_inconsistency,
                "cell volume " + format_rational(volume) + " differs from mass " + format_rational(mass), leaf);
  return volume;
}

}  // namespace ptree
