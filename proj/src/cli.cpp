#include "ptree/cli.hpp"

#include "ptree/bernoulli.hpp"
#include "ptree/encode.hpp"
#include "ptree/error.hpp"
#include "ptree/expectation.hpp"
#include "ptree/interval.hpp"
#include "ptree/sampler.hpp"
#include "ptree/spec_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace ptree {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t depth_budget_from_env() {
  const char* v = std::getenv("PTREE_DEPTH_BUDGET");
  if (!v || !*v) return kDefaultDepthBudget;
  try {
    std::size_t pos = 0;
    unsigned long long n = std::stoull(v, &pos);
    if (pos != std::string(v).size()) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw UsageError(std::string("PTREE_DEPTH_BUDGET must be a nonnegative integer, got \"") + v + "\"");
  }
}

struct Options {
  std::string tree;
  std::string node;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> front_level;
  std::string p;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::size_t count = 1;
  bool check_mass = false;
  bool flip_success = false;
  std::optional<std::uint64_t> random_seed;
  std::string min_p;
  std::string values;
  std::optional<std::uint64_t> count_index;
  bool summary = false;
  bool verify = false;
};

class Runner {
public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  EdgeFamily family() const {
    if (o_.tree.empty()) throw UsageError("--tree is required");
    return load_spec_file(o_.tree, depth_budget_from_env());
  }

  NodePath node(const NodePath& fallback = {}) const { return o_.node.empty() ? fallback : NodePath::parse(o_.node); }

  std::size_t depth_for(const EdgeFamily& f) const {
    if (o_.depth) return *o_.depth;
    if (f.is_explicit()) return f.tree().max_depth();
    throw UsageError("--depth is required for generated trees");
  }

  void measure() {
    EdgeFamily f = family();
    if (!o_.node.empty()) {
      out_ << format_rational(xi(f, node())) << "\n";
      return;
    }
    std::size_t d = depth_for(f);
    for_each_node(f.tree(), d, [&](const NodePath& t, const ChildSet&) {
      out_ << t.display() << "\t" << format_rational(xi(f, t)) << "\n";
    });
  }

  void front() {
    EdgeFamily f = family();
    std::size_t d = depth_for(f);
    Front fr = enumerate_front(f.tree(), d);
    Rational total = 0;
    for (const auto& s : fr.nodes) {
      Rational m = xi(f, s);
      total += m;
      if (!o_.check_mass) out_ << s.display() << "\t" << format_rational(m) << "\n";
    }
    if (o_.check_mass) out_ << "mass = " << format_rational(total) << "\n";
  }

  void expect() {
    EdgeFamily f = family();
    if (!o_.front_level) throw UsageError("--front-level is required");
    if (o_.values.empty() == !o_.count_index) throw UsageError("give exactly one of --values and --count-index");
    Front fr = enumerate_front(f.tree(), *o_.front_level);
    FrontVariable x;
    if (o_.count_index) {
      std::uint64_t k = *o_.count_index;
      x = FrontVariable::from_function(fr, [k](const NodePath& s) {
        return Rational(static_cast<long long>(std::count(s.indices().begin(), s.indices().end(), k)));
      });
    } else {
      x = FrontVariable::from_function(fr, read_values(o_.values));
    }
    out_ << format_rational(relative_expect(f, x, node())) << "\n";
  }

  static std::function<Rational(const NodePath&)> read_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::invalid_argument, "cannot read " + path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::syntax_error, path + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::validation_error, path + ": expected an object of node values");
    auto table = std::make_shared<std::map<NodePath, Rational>>();
    for (const auto& [key, v] : doc.items()) {
      if (!v.is_string()) throw Error(Errc::validation_error, path + ": value of \"" + key + "\" must be a fraction string");
      (*table)[NodePath::parse(key)] = parse_rational(v.get<std::string>());
    }
    return [table](const NodePath& s) {
      auto it = table->find(s);
      if (it == table->end()) throw Error(Errc::validation_error, "no value given for front member", s);
      return it->second;
    };
  }

  void bound() {
    if (o_.p.empty()) throw UsageError("--p is required");
    Rational p = parse_rational(o_.p);
    std::optional<DependentTrialTree> trials;
    if (!o_.tree.empty()) {
      if (o_.random_seed) throw UsageError("--tree and --random exclude each other");
      trials = DependentTrialTree::from_family(family(), o_.n, o_.flip_success);
    } else if (o_.random_seed) {
      if (!o_.n) throw UsageError("--random needs --n");
      Rational min_p = o_.min_p.empty() ? p : parse_rational(o_.min_p);
      trials = DependentTrialTree::random(*o_.n, min_p, *o_.random_seed);
    } else {
      if (!o_.n) throw UsageError("give --tree, --random or --n");
      trials = DependentTrialTree::iid(*o_.n, p);
    }
    DominanceReport r = dominance_check(*trials, p);
    out_ << "z\tCDF(Y)\tCDF(B)\tmargin\n";
    for (const auto& row : r.rows)
      out_ << row.z << "\t" << format_rational(row.cdf_y) << "\t" << format_rational(row.cdf_binomial) << "\t"
           << format_rational(row.margin) << "\n";
    if (r.holds)
      out_ << "dominance holds for n = " << trials->trials() << ", p = " << format_rational(p) << "\n";
    else
      throw Error(Errc::internal_inconsistency, "dominance fails at z = " + std::to_string(*r.violated_z));
  }

  void embed() {
    EdgeFamily f = family();
    out_ << format_interval(interval(f, node())) << "\n";
  }

  void sample() {
    EdgeFamily f = family();
    if (!o_.depth) throw UsageError("--depth is required");
    std::vector<NodePath> paths = sample_branch(f, o_.seed.value_or(0), o_.count, *o_.depth);
    if (!o_.summary) {
      for (const auto& s : paths) out_ << s.display() << "\n";
      return;
    }
    std::map<NodePath, std::size_t> counts;
    for (const auto& s : paths) ++counts[s];
    out_ << "node\tcount\tempirical frequency (floating point)\texact mass\n";
    for (const auto& [s, c] : counts)
      out_ << s.display() << "\t" << c << "\t" << std::setprecision(6)
           << static_cast<double>(c) / static_cast<double>(paths.size()) << "\t" << format_rational(xi(f, s)) << "\n";
  }

  void encode_cmd() {
    EdgeFamily f = family();
    std::size_t d = depth_for(f);
    if (!o_.node.empty()) {
      BinaryEncoding enc = encode(f.tree(), d);
      out_ << enc.h(node()).display() << "\n";
      return;
    }
    if (o_.verify) {
      EncodingReport r = verify_encoding(f, d);
      out_ << "inductive: " << (r.inductive ? "yes" : "no") << "\n"
           << "intervals match: " << (r.intervals_match ? "yes" : "no") << "\n"
           << "order laws: " << (r.order_laws ? "yes" : "no") << "\n"
           << "splitting or maximal: " << (r.split_or_maximal ? "yes" : "no") << "\n"
           << "nodes checked: " << r.nodes_checked << "\n";
      for (const auto& s : r.failures) out_ << "failure: " << s << "\n";
      if (!r.ok()) throw Error(Errc::internal_inconsistency, "encoding check failed");
      return;
    }
    BinaryEncoding enc = encode(f.tree(), d);
    for (const auto& [t, img] : enc.images())
      out_ << t.display() << "\t" << img.display() << "\t" << format_rational(xi_star_at(f, enc, img)) << "\n";
  }

  void classify_cmd() {
    EdgeFamily f = family();
    Classification c = classify(f.tree());
    auto flag = [&](const char* name, const Flag& fl) {
      out_ << name << ": " << (fl.value ? "yes" : "no");
      if (!fl.exact) out_ << " (up to depth " << c.examined_depth << ")";
      out_ << "\n";
    };
    flag("well pruned", c.well_pruned);
    flag("finitely branching", c.finitely_branching);
    flag("perfect", c.perfect);
    out_ << "height: " << (c.height ? std::to_string(*c.height) : std::string("unknown")) << "\n";
  }

private:
  const Options& o_;
  std::ostream& out_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact probability trees", "ptree"};
  app.require_subcommand(1);
  Options o;

  auto tree_opt = [&](CLI::App* sub) { sub->add_option("--tree", o.tree, "tree spec file (JSON)")->required(); };
  auto node_opt = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--node", o.node, "node as dot-separated indices");
    if (required) opt->required();
  };

  auto* measure = app.add_subcommand("measure", "mass of a node, or of every node up to --depth");
  tree_opt(measure);
  node_opt(measure, false);
  measure->add_option("--depth", o.depth);

  auto* front = app.add_subcommand("front", "level front padded with shorter maximal nodes");
  tree_opt(front);
  front->add_option("--depth", o.depth);
  front->add_flag("--check-mass", o.check_mass, "print only the total mass");

  auto* expect = app.add_subcommand("expect", "expected value of a front variable given a node");
  tree_opt(expect);
  node_opt(expect, false);
  expect->add_option("--front-level", o.front_level)->required();
  expect->add_option("--values", o.values, "JSON object of node -> fraction string");
  expect->add_option("--count-index", o.count_index, "count how often this index occurs along the node");

  auto* bound = app.add_subcommand("bound", "CDF dominance of dependent trials by a binomial");
  bound->add_option("--tree", o.tree);
  bound->add_option("--n", o.n);
  bound->add_option("--p", o.p)->required();
  bound->add_option("--random", o.random_seed, "seed for random success probabilities");
  bound->add_option("--min-p", o.min_p, "lower bound for random success probabilities");
  bound->add_flag("--flip-success", o.flip_success, "count successor 1 as success");

  auto* embed = app.add_subcommand("embed", "unit interval cell of a node");
  tree_opt(embed);
  node_opt(embed, true);

  auto* sample = app.add_subcommand("sample", "sample branch prefixes");
  tree_opt(sample);
  sample->add_option("--seed", o.seed);
  sample->add_option("--count", o.count);
  sample->add_option("--depth", o.depth)->required();
  sample->add_flag("--summary", o.summary, "print counts per node instead of the draws");

  auto* enc = app.add_subcommand("encode", "embedding into the binary tree");
  tree_opt(enc);
  node_opt(enc, false);
  enc->add_option("--depth", o.depth);
  enc->add_flag("--verify", o.verify, "check that the embedding preserves the measure");

  auto* cls = app.add_subcommand("classify", "structural properties of the tree");
  tree_opt(cls);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  Runner run(o, out);
  try {
    if (*measure) run.measure();
    else if (*front) run.front();
    else if (*expect) run.expect();
    else if (*bound) run.bound();
    else if (*embed) run.embed();
    else if (*sample) run.sample();
    else if (*enc) run.encode_cmd();
    else if (*cls) run.classify_cmd();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ptree
