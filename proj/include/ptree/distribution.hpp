#pragma once

#include "ptree/rational.hpp"
#include "ptree/tree.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ptree {

// A probability distribution over the successors of one node, indexed by the
// successor's last entry.
//   table         finitely many successors with explicit masses
//   geometric     successors 0, 1, 2, ... with mass (1 - r) r^k
//   sparse_omega  successors 0, 1, 2, ... of which finitely many carry mass
class Distribution {
public:
  enum class Kind { table, geometric, sparse_omega };
  using Entry = std::pair<std::uint64_t, Rational>;

  Distribution() = default;  // empty table
  static Distribution table(const std::vector<Rational>& probs);
  static Distribution table(std::vector<Entry> entries);
  static Distribution uniform(const ChildSet& children);
  static Distribution geometric(Rational ratio);
  static Distribution sparse_omega(std::vector<Entry> support);
  static Distribution dirac_omega(std::uint64_t k);

  Kind kind() const noexcept { return kind_; }
  ChildSet children() const;
  bool has_child(std::uint64_t k) const;

  // Mass of successor k. Throws UnknownNode for a table without k.
  Rational mass(std::uint64_t k) const;
  // Total mass of the successors with index < k.
  Rational mass_before(std::uint64_t k) const;
  Rational max_mass() const;
  // Indices with positive mass, or nullopt when there are infinitely many.
  std::optional<std::vector<std::uint64_t>> positive_support() const;
  // The same masses on the positive-mass successors only.
  Distribution restrict_positive() const;

  // Empty when this is a probability distribution.
  std::vector<std::string> violations() const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Rational& ratio() const noexcept { return ratio_; }

  std::string describe() const;

  friend bool operator==(const Distribution& a, const Distribution& b);

private:
  Kind kind_ = Kind::table;
  std::vector<Entry> entries_;  // sorted by index
  Rational ratio_;
};

}  // namespace ptree
