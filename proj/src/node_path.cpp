#include "ptree/node_path.hpp"

#include "ptree/error.hpp"

#include <algorithm>
#include <charconv>

namespace ptree {

NodePath NodePath::prefix(std::size_t n) const {
  if (n >= indices_.size()) return *this;
  return NodePath(std::vector<std::uint64_t>(indices_.begin(), indices_.begin() + n));
}

NodePath NodePath::child(std::uint64_t k) const {
  auto v = indices_;
  v.push_back(k);
  return NodePath(std::move(v));
}

NodePath NodePath::parent() const {
  if (indices_.empty()) throw Error(Errc::invalid_argument, "the root has no parent");
  return prefix(indices_.size() - 1);
}

NodePath NodePath::concat(const NodePath& tail) const {
  auto v = indices_;
  v.insert(v.end(), tail.indices_.begin(), tail.indices_.end());
  return NodePath(std::move(v));
}

bool NodePath::is_prefix_of(const NodePath& other) const noexcept {
  return indices_.size() <= other.indices_.size() &&
         std::equal(indices_.begin(), indices_.end(), other.indices_.begin());
}

bool NodePath::compatible_with(const NodePath& other) const noexcept {
  return is_prefix_of(other) || other.is_prefix_of(*this);
}

std::string NodePath::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(indices_[i]);
  }
  return out;
}

std::string NodePath::display() const { return is_root() ? "<>" : to_string(); }

NodePath NodePath::parse(std::string_view text) {
  if (text.empty() || text == "<>") return {};
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = text.find('.', pos);
    std::string_view part = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
      throw Error(Errc::validation_error, "bad node path '" + std::string(text) + "'");
    out.push_back(value);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return NodePath(std::move(out));
}

std::size_t NodePathHash::operator()(const NodePath& t) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ t.size();
  for (auto k : t.indices()) h ^= std::hash<std::uint64_t>{}(k) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

Relation order_relation(const NodePath& s, const NodePath& t) {
  std::size_t n = std::min(s.size(), t.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] < t[i]) return Relation::lex_less;
    if (s[i] > t[i]) return Relation::lex_greater;
  }
  if (s.size() == t.size()) return Relation::equal;
  return s.size() < t.size() ? Relation::prefix : Relation::extension;
}

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::equal: return "equal";
    case Relation::prefix: return "prefix";
    case Relation::extension: return "extension";
    case Relation::lex_less: return "lex_less";
    case Relation::lex_greater: return "lex_greater";
  }
  return "?";
}

}  // namespace ptree
