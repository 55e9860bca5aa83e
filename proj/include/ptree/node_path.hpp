#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace ptree {

// A node of a tree of sequences: the finite sequence of child indices that
// leads from the root to it. The empty sequence is the root.
class NodePath {
public:
  NodePath() = default;
  NodePath(std::initializer_list<std::uint64_t> indices) : indices_(indices) {}
  explicit NodePath(std::vector<std::uint64_t> indices) : indices_(std::move(indices)) {}

  std::size_t size() const noexcept { return indices_.size(); }
  bool is_root() const noexcept { return indices_.empty(); }
  std::uint64_t operator[](std::size_t i) const { return indices_[i]; }
  std::uint64_t back() const { return indices_.back(); }
  const std::vector<std::uint64_t>& indices() const noexcept { return indices_; }

  // t restricted to its first n entries.
  NodePath prefix(std::size_t n) const;
  NodePath child(std::uint64_t k) const;
  NodePath parent() const;
  NodePath concat(const NodePath& tail) const;

  // this ⊆ other: other extends this (or equals it).
  bool is_prefix_of(const NodePath& other) const noexcept;
  bool compatible_with(const NodePath& other) const noexcept;

  // Dot-separated indices, "" for the root.
  std::string to_string() const;
  // Same as to_string but the root prints as "<>".
  std::string display() const;
  static NodePath parse(std::string_view text);

  friend auto operator<=>(const NodePath&, const NodePath&) = default;
  friend bool operator==(const NodePath&, const NodePath&) = default;

private:
  std::vector<std::uint64_t> indices_;
};

struct NodePathHash {
  std::size_t operator()(const NodePath& t) const noexcept;
};

enum class Relation { equal, prefix, extension, lex_less, lex_greater };

// prefix: s is a proper initial segment of t; extension: the reverse.
// Incompatible pairs are ordered at their first difference.
Relation order_relation(const NodePath& s, const NodePath& t);

std::string_view relation_name(Relation r);

}  // namespace ptree
