#include "ptree/distribution.hpp"

#include "ptree/error.hpp"

#include <algorithm>

namespace ptree {

namespace {

void sort_entries(std::vector<Distribution::Entry>& e) {
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    if (e[i].first == e[i + 1].first)
      throw Error(Errc::validation_error, "successor " + std::to_string(e[i].first) + " listed twice");
}

}  // namespace

Distribution Distribution::table(const std::vector<Rational>& probs) {
  std::vector<Entry> e;
  e.reserve(probs.size());
  for (std::size_t k = 0; k < probs.size(); ++k) e.emplace_back(k, probs[k]);
  return table(std::move(e));
}

Distribution Distribution::table(std::vector<Entry> entries) {
  sort_entries(entries);
  Distribution d;
  d.kind_ = Kind::table;
  d.entries_ = std::move(entries);
  return d;
}

Distribution Distribution::uniform(const ChildSet& children) {
  const auto& idx = children.indices();
  std::vector<Entry> e;
  for (auto k : idx) e.emplace_back(k, Rational(1, static_cast<long>(idx.size())));
  return table(std::move(e));
}

Distribution Distribution::geometric(Rational ratio) {
  Distribution d;
  d.kind_ = Kind::geometric;
  d.ratio_ = std::move(ratio);
  return d;
}

Distribution Distribution::sparse_omega(std::vector<Entry> support) {
  sort_entries(support);
  Distribution d;
  d.kind_ = Kind::sparse_omega;
  for (auto& en : support)
    if (en.second != 0) d.entries_.push_back(std::move(en));
  return d;
}

Distribution Distribution::dirac_omega(std::uint64_t k) { return sparse_omega({{k, Rational(1)}}); }

ChildSet Distribution::children() const {
  if (kind_ != Kind::table) return ChildSet::omega();
  std::vector<std::uint64_t> idx;
  idx.reserve(entries_.size());
  for (const auto& en : entries_) idx.push_back(en.first);
  return ChildSet::finite(std::move(idx));
}

bool Distribution::has_child(std::uint64_t k) const {
  if (kind_ != Kind::table) return true;
  return std::binary_search(entries_.begin(), entries_.end(), Entry{k, Rational()},
                            [](const Entry& a, const Entry& b) { return a.first < b.first; });
}

Rational Distribution::mass(std::uint64_t k) const {
  switch (kind_) {
    case Kind::geometric:
      return (1 - ratio_) * rational_pow(ratio_, k);
    case Kind::sparse_omega:
    case Kind::table: {
      auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                                 [](const Entry& a, std::uint64_t key) { return a.first < key; });
      if (it != entries_.end() && it->first == k) return it->second;
      if (kind_ == Kind::sparse_omega) return 0;
      throw Error(Errc::unknown_node, "no successor with index " + std::to_string(k));
    }
  }
  return 0;
}

Rational Distribution::mass_before(std::uint64_t k) const {
  if (kind_ == Kind::geometric) return 1 - rational_pow(ratio_, k);
  Rational sum = 0;
  for (const auto& [j, m] : entries_) {
    if (j >= k) break;
    sum += m;
  }
  return sum;
}

Rational Distribution::max_mass() const {
  if (kind_ == Kind::geometric) return 1 - ratio_;  // masses decrease in k
  Rational best = 0;
  for (const auto& en : entries_) best = std::max(best, en.second);
  return best;
}

std::optional<std::vector<std::uint64_t>> Distribution::positive_support() const {
  if (kind_ == Kind::geometric) {
    if (ratio_ == 0) return std::vector<std::uint64_t>{0};
    if (ratio_ > 0 && ratio_ < 1) return std::nullopt;
    return std::vector<std::uint64_t>{};
  }
  std::vector<std::uint64_t> out;
  for (const auto& [k, m] : entries_)
    if (m > 0) out.push_back(k);
  return out;
}

Distribution Distribution::restrict_positive() const {
  if (kind_ == Kind::geometric && ratio_ > 0 && ratio_ < 1) return *this;
  if (kind_ == Kind::geometric) return table(std::vector<Entry>{{0, Rational(1)}});
  std::vector<Entry> kept;
  for (const auto& en : entries_)
    if (en.second > 0) kept.push_back(en);
  return table(std::move(kept));
}

std::vector<std::string> Distribution::violations() const {
  std::vector<std::string> out;
  if (kind_ == Kind::geometric) {
    if (ratio_ < 0 || ratio_ >= 1) out.push_back("geometric ratio " + format_rational(ratio_) + " is outside [0,1)");
    return out;
  }
  Rational sum = 0;
  for (const auto& [k, m] : entries_) {
    if (m < 0 || m > 1)
      out.push_back("mass " + format_rational(m) + " of successor " + std::to_string(k) + " is outside [0,1]");
    sum += m;
  }
  if (sum != 1) out.push_back("masses sum to " + format_rational(sum) + ", not 1");
  return out;
}

std::string Distribution::describe() const {
  if (kind_ == Kind::geometric) return "geometric(" + format_rational(ratio_) + ")";
  std::string s = kind_ == Kind::table ? "(" : "omega{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += ", ";
    if (kind_ == Kind::sparse_omega || entries_[i].first != i) s += std::to_string(entries_[i].first) + ":";
    s += format_rational(entries_[i].second);
  }
  return s + (kind_ == Kind::table ? ")" : "}");
}

bool operator==(const Distribution& a, const Distribution& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == Distribution::Kind::geometric) return a.ratio_ == b.ratio_;
  return a.entries_ == b.entries_;
}

}  // namespace ptree
