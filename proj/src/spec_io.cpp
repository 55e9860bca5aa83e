#include "ptree/spec_io.hpp"

#include "ptree/error.hpp"

#include <json.hpp>

#include <fstream>
#include <regex>
#include <sstream>

namespace ptree {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& path, const std::string& reason) {
  throw Error(Errc::validation_error, path + ": " + reason);
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

std::string node_key_path(const std::string& key) { return "nodes[\"" + key + "\"]"; }

std::uint64_t read_index(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) invalid(path, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

Rational read_fraction(const json& v, const std::string& path) {
  if (!v.is_string()) invalid(path, "fractions must be strings such as \"1/2\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    invalid(path, e.what());
  }
}

EdgeFamily parse_explicit(const json& doc) {
  if (!doc.contains("nodes") || !doc["nodes"].is_object()) invalid("nodes", "expected an object of nodes");
  std::map<NodePath, Distribution> dists;
  std::set<NodePath> declared;
  std::map<NodePath, std::string> keys;
  for (const auto& [key, node] : doc["nodes"].items()) {
    std::string path = node_key_path(key);
    NodePath t;
    try {
      t = NodePath::parse(key);
    } catch (const Error& e) {
      invalid(path, "bad node key");
    }
    if (!declared.insert(t).second) invalid(path, "node listed twice");
    keys[t] = key;
    if (!node.is_object()) invalid(path, "expected an object");
    for (const auto& [field, _] : node.items())
      if (field != "arity" && field != "probs" && field != "children") invalid(path + "." + field, "unknown field");
    if (!node.contains("arity")) invalid(path, "missing arity");
    std::uint64_t arity = read_index(node["arity"], path + ".arity");
    std::vector<std::uint64_t> children;
    if (node.contains("children")) {
      if (!node["children"].is_array()) invalid(path + ".children", "expected an array");
      for (std::size_t i = 0; i < node["children"].size(); ++i)
        children.push_back(read_index(node["children"][i], path + ".children[" + std::to_string(i) + "]"));
      if (children.size() != arity) invalid(path + ".children", "length differs from arity");
    } else {
      for (std::uint64_t k = 0; k < arity; ++k) children.push_back(k);
    }
    std::vector<Rational> probs;
    if (node.contains("probs")) {
      if (!node["probs"].is_array()) invalid(path + ".probs", "expected an array");
      for (std::size_t i = 0; i < node["probs"].size(); ++i)
        probs.push_back(read_fraction(node["probs"][i], path + ".probs[" + std::to_string(i) + "]"));
    }
    if (probs.size() != arity) invalid(path + ".probs", "expected " + std::to_string(arity) + " probabilities");
    if (arity == 0) continue;
    std::vector<Distribution::Entry> entries;
    for (std::size_t i = 0; i < arity; ++i) entries.emplace_back(children[i], probs[i]);
    try {
      Distribution d = Distribution::table(std::move(entries));
      auto v = d.violations();
      if (!v.empty()) invalid(path + ".probs", v.front());
      dists.emplace(t, std::move(d));
    } catch (const Error& e) {
      if (e.code() == Errc::validation_error && std::string(e.what()).find(path) != std::string::npos) throw;
      invalid(path, e.what());
    }
  }
  if (!declared.count(NodePath{})) invalid("nodes", "the root \"\" is missing");
  for (const auto& t : declared)
    if (!t.is_root() && !declared.count(t.parent())) invalid(node_key_path(keys[t]), "parent node is missing");
  for (const auto& [t, d] : dists)
    for (auto k : d.children().indices())
      if (!declared.count(t.child(k)))
        invalid(node_key_path(keys[t]), "successor " + t.child(k).to_string() + " is not listed");
  for (const auto& t : declared) {
    if (t.is_root()) continue;
    auto it = dists.find(t.parent());
    if (it == dists.end() || !it->second.has_child(t.back()))
      invalid(node_key_path(keys[t]), "not a successor of its parent");
  }
  return EdgeFamily::from_table(dists);
}

EdgeFamily parse_generator(const json& doc, std::size_t default_budget) {
  if (!doc.contains("generator") || !doc["generator"].is_string()) invalid("generator", "expected a generator name");
  std::string name = doc["generator"].get<std::string>();
  std::size_t budget = default_budget;
  if (doc.contains("depth_budget")) budget = read_index(doc["depth_budget"], "depth_budget");
  if (name == "uniform_binary") return EdgeFamily::uniform_binary(budget);
  if (name == "geometric_omega") {
    Rational r(1, 2);
    if (doc.contains("ratio")) r = read_fraction(doc["ratio"], "ratio");
    if (r <= 0 || r >= 1) invalid("ratio", "must lie strictly between 0 and 1");
    return EdgeFamily::geometric_omega(budget, r);
  }
  static const std::regex dirac(R"(dirac\((\d+)\))");
  std::smatch m;
  if (std::regex_match(name, m, dirac)) return EdgeFamily::dirac_omega(std::stoull(m[1].str()), budget);
  throw Error(Errc::unknown_generator, "unknown generator \"" + name + "\"");
}

}  // namespace

EdgeFamily parse_spec(std::string_view text, std::size_t default_depth_budget) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    Error err(Errc::syntax_error, "line " + std::to_string(line_of(text, e.byte ? e.byte - 1 : 0)) + ": " +
                                      e.what());
    err.line = line_of(text, e.byte ? e.byte - 1 : 0);
    throw err;
  }
  if (!doc.is_object()) invalid("$", "expected an object");
  if (doc.contains("version") && (!doc["version"].is_number_integer() || doc["version"].get<long long>() != 1))
    invalid("version", "only version 1 is supported");
  if (!doc.contains("representation") || !doc["representation"].is_string())
    invalid("representation", "expected \"explicit\" or \"generator\"");
  std::string rep = doc["representation"].get<std::string>();
  if (rep == "explicit") return parse_explicit(doc);
  if (rep == "generator") return parse_generator(doc, default_depth_budget);
  invalid("representation", "expected \"explicit\" or \"generator\"");
}

std::string serialize_spec(const EdgeFamily& family) {
  json doc;
  doc["version"] = 1;
  if (family.is_explicit()) {
    doc["representation"] = "explicit";
    json nodes = json::object();
    for (const auto& t : family.tree().nodes()) {
      json node;
      auto d = family.at_member(t);
      if (!d) {
        node["arity"] = 0;
        node["probs"] = json::array();
      } else {
        json probs = json::array();
        std::vector<std::uint64_t> kids;
        for (const auto& [k, m] : d->entries()) {
          kids.push_back(k);
          probs.push_back(format_rational(m));
        }
        node["arity"] = kids.size();
        node["probs"] = probs;
        if (!d->children().canonical()) node["children"] = kids;
      }
      nodes[t.to_string()] = node;
    }
    doc["nodes"] = nodes;
    return doc.dump(2) + "\n";
  }
  const auto& info = family.generator();
  if (!info) throw Error(Errc::requires_explicit_finite_tree, "only explicit families and named generators serialize");
  doc["representation"] = "generator";
  doc["generator"] = info->name;
  doc["depth_budget"] = *family.depth_budget();
  if (info->name == "geometric_omega" && info->uniform) {
    Rational r = info->uniform->ratio();
    if (r != Rational(1, 2)) doc["ratio"] = format_rational(r);
  } else if (info->name != "uniform_binary" && info->name.rfind("dirac(", 0) != 0) {
    throw Error(Errc::requires_explicit_finite_tree, "generator \"" + info->name + "\" has no document form");
  }
  return doc.dump(2) + "\n";
}

EdgeFamily load_spec_file(const std::string& path, std::size_t default_depth_budget) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), default_depth_budget);
}

}  // namespace ptree
