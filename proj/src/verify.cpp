#include "turtleglyph/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace turtleglyph {

namespace {

void collect_node_masses(const std::vector<EventNode>& nodes, EventPath& prefix,
                         const Prob& mass, std::map<EventPath, Prob>& out) {
  for (const EventNode& node : nodes) {
    prefix.push_back(node.name);
    Prob node_mass = mass * node.cond_prob;
    out.emplace(prefix, node_mass);
    collect_node_masses(node.children, prefix, node_mass, out);
    prefix.pop_back();
  }
}

}  // namespace

EquivalenceReport check_equivalence(const EventTree& tree, const TurtlebackLayout& layout) {
  // Independent re-derivation of every node's mass from the edge weights.
  std::map<EventPath, Prob> expected;
  expected.emplace(EventPath{}, Prob::one());
  EventPath prefix;
  collect_node_masses(tree.root_children, prefix, Prob::one(), expected);

  if (layout.regions.size() != expected.size())
    throw LayoutMismatchError("layout has " + std::to_string(layout.regions.size()) +
                              " regions but the tree has " +
                              std::to_string(expected.size()) + " nodes");

  EquivalenceReport report;
  for (const RegionGeometry& region : layout.regions) {
    auto it = expected.find(region.node_path);
    if (it == expected.end())
      throw LayoutMismatchError("layout region " + path_display(region.node_path) +
                                " does not exist in the tree");
    ++report.checked_nodes;
    if (region.angle_span == it->second) continue;
    report.violations.push_back(
        EquivalenceViolation{region.node_path, region.angle_span, it->second});
    Prob gap = abs_difference(region.angle_span, it->second);
    if (gap > report.max_discrepancy) report.max_discrepancy = gap;
  }
  return report;
}

bool refinement_holds(const Partition& coarse, const Partition& fine) {
  std::map<EventPath, Prob> mass_under;  // coarse prefix -> Σ fine masses
  std::map<EventPath, const Prob*> coarse_mass;
  for (const PartitionCell& cell : coarse.cells) {
    if (!coarse_mass.emplace(cell.prefix, &cell.prob).second) return false;  // duplicate cell
    mass_under.emplace(cell.prefix, Prob::zero());
  }

  std::size_t coarse_len = static_cast<std::size_t>(std::max(coarse.depth, 0));
  for (const PartitionCell& cell : fine.cells) {
    EventPath key(cell.prefix.begin(),
                  cell.prefix.begin() +
                      static_cast<long>(std::min(cell.prefix.size(), coarse_len)));
    auto it = mass_under.find(key);
    if (it == mass_under.end()) return false;  // fine cell outside every coarse cell
    it->second += cell.prob;
  }

  for (const auto& [prefix, total] : mass_under)
    if (!(total == *coarse_mass.at(prefix))) return false;
  return true;
}

bool check_refinement(const EventTree& tree) {
  int depth = max_depth(tree);
  for (int k = 0; k < depth; ++k) {
    if (!refinement_holds(level_partition(tree, k), level_partition(tree, k + 1)))
      return false;
  }
  return true;
}

namespace {

// SplitMix64: the sampler's named generator.
inline std::uint64_t splitmix_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  return splitmix_mix(state);
}

// A chunk's stream starts from the fully mixed (seed, chunk) pair. Without
// the avalanche, neighbouring chunks would start at states a fixed multiple
// of the stream increment apart and replay each other's draws.
inline std::uint64_t chunk_stream_state(std::uint64_t seed, std::uint64_t chunk) {
  return splitmix_mix(seed + (chunk + 1) * 0x9e3779b97f4a7c15ull);
}

// Unbiased uniform draw in [0, bound) by rejection.
inline std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound) {
  if (bound <= 1) return 0;
  std::uint64_t limit = ~0ull - ~0ull % bound;
  std::uint64_t draw;
  do {
    draw = splitmix64(state);
  } while (draw >= limit);
  return draw % bound;
}

constexpr std::uint64_t kSampleChunk = 4096;

// Flattened tree with per-node integer thresholds over a common denominator,
// so a child pick is one integer draw plus a scan.
struct SamplingPlan {
  struct Node {
    std::uint64_t total = 0;                  // common denominator of the children
    std::vector<std::uint64_t> cumulative;    // scaled cumulative numerators
    std::vector<std::int32_t> child;          // node index per child, -1 none
    std::int32_t leaf_index = -1;
  };

  std::vector<Node> nodes;  // nodes[0] is the root
  std::vector<EventPath> leaf_labels;

  explicit SamplingPlan(const EventTree& tree) {
    nodes.emplace_back();
    EventPath prefix;
    build(tree.root_children, 0, prefix);
  }

  void build(const std::vector<EventNode>& children, std::size_t index, EventPath& prefix) {
    if (children.empty()) {
      nodes[index].leaf_index = static_cast<std::int32_t>(leaf_labels.size());
      leaf_labels.push_back(prefix);
      return;
    }
    BigInt denominator = 1;
    for (const EventNode& child : children)
      denominator = boost::multiprecision::lcm(denominator, child.cond_prob.denominator());
    if (denominator > BigInt(1) << 62)
      throw DomainError("edge-weight denominators too large for integer sampling");

    std::uint64_t total = denominator.convert_to<std::uint64_t>();
    std::uint64_t running = 0;
    std::vector<std::size_t> child_indices;
    for (const EventNode& child : children) {
      BigInt scaled = child.cond_prob.numerator() *
                      (denominator / child.cond_prob.denominator());
      running += scaled.convert_to<std::uint64_t>();
      nodes[index].cumulative.push_back(running);
      child_indices.push_back(nodes.size());
      nodes[index].child.push_back(static_cast<std::int32_t>(nodes.size()));
      nodes.emplace_back();
    }
    nodes[index].total = total;

    for (std::size_t c = 0; c < children.size(); ++c) {
      prefix.push_back(children[c].name);
      build(children[c].children, child_indices[c], prefix);
      prefix.pop_back();
    }
  }

  std::int32_t walk(std::uint64_t& state) const {
    std::size_t at = 0;
    while (nodes[at].leaf_index < 0) {
      const Node& node = nodes[at];
      std::uint64_t draw = uniform_below(state, node.total);
      std::size_t pick = 0;
      while (draw >= node.cumulative[pick]) ++pick;
      at = static_cast<std::size_t>(node.child[pick]);
    }
    return nodes[at].leaf_index;
  }
};

struct LeafFlags {
  std::vector<unsigned char> target;
  std::vector<unsigned char> condition;  // all ones for unconditional queries
};

LeafFlags flag_leaves(const EventTree& tree, const SamplingPlan& plan, const Query& query) {
  LeafFlags flags;
  flags.target.reserve(plan.leaf_labels.size());
  flags.condition.reserve(plan.leaf_labels.size());
  for (const EventPath& label : plan.leaf_labels) {
    LeafAtom probe{label, Prob::zero()};
    flags.target.push_back(pattern_match(probe, query.target) ? 1 : 0);
    flags.condition.push_back(
        !query.condition || pattern_match(probe, *query.condition) ? 1 : 0);
  }
  (void)tree;
  return flags;
}

struct HitCounts {
  std::uint64_t joint = 0;      // target ∧ condition
  std::uint64_t condition = 0;  // condition alone (== n for unconditional)
};

// One chunk of the fixed schedule; both kernels run exactly this.
HitCounts count_chunk(const SamplingPlan& plan, const LeafFlags& flags, std::uint64_t seed,
                      std::uint64_t chunk, std::uint64_t chunk_samples) {
  std::uint64_t state = chunk_stream_state(seed, chunk);
  HitCounts counts;
  for (std::uint64_t i = 0; i < chunk_samples; ++i) {
    std::int32_t leaf = plan.walk(state);
    bool in_condition = flags.condition[static_cast<std::size_t>(leaf)] != 0;
    counts.condition += in_condition ? 1 : 0;
    counts.joint +=
        (in_condition && flags.target[static_cast<std::size_t>(leaf)] != 0) ? 1 : 0;
  }
  return counts;
}

SampleEstimate finish_estimate(const Query& query, std::uint64_t n, HitCounts counts) {
  SampleEstimate estimate;
  if (query.condition) {
    if (counts.condition == 0)
      throw NoConditionHitsError("condition '" + query.condition->to_string() +
                                 "' never occurred in " + std::to_string(n) + " samples");
    estimate.n = counts.condition;
    estimate.hits = counts.joint;
  } else {
    estimate.n = n;
    estimate.hits = counts.joint;
  }
  double p = static_cast<double>(estimate.hits) / static_cast<double>(estimate.n);
  estimate.estimate = p;
  estimate.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(estimate.n));
  return estimate;
}

}  // namespace

std::vector<EventPath> sample_paths(const EventTree& tree, std::uint64_t n,
                                    std::uint64_t seed) {
  SamplingPlan plan(tree);
  std::vector<EventPath> out(n);
  std::uint64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;

#pragma omp parallel for schedule(static)
  for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
    std::uint64_t chunk = static_cast<std::uint64_t>(c);
    std::uint64_t begin = chunk * kSampleChunk;
    std::uint64_t end = std::min(n, begin + kSampleChunk);
    std::uint64_t state = chunk_stream_state(seed, chunk);
    for (std::uint64_t i = begin; i < end; ++i)
      out[i] = plan.leaf_labels[static_cast<std::size_t>(plan.walk(state))];
  }
  return out;
}

SampleEstimate estimate_query(const EventTree& tree, const Query& query, std::uint64_t n,
                              std::uint64_t seed) {
  SamplingPlan plan(tree);
  LeafFlags flags = flag_leaves(tree, plan, query);
  std::uint64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;

  std::uint64_t joint = 0, condition = 0;
#pragma omp parallel for schedule(static) reduction(+ : joint, condition)
  for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
    std::uint64_t chunk = static_cast<std::uint64_t>(c);
    std::uint64_t begin = chunk * kSampleChunk;
    std::uint64_t end = std::min(n, begin + kSampleChunk);
    HitCounts counts = count_chunk(plan, flags, seed, chunk, end - begin);
    joint += counts.joint;
    condition += counts.condition;
  }
  return finish_estimate(query, n, HitCounts{joint, condition});
}

SampleEstimate estimate_query_serial(const EventTree& tree, const Query& query,
                                     std::uint64_t n, std::uint64_t seed) {
  SamplingPlan plan(tree);
  LeafFlags flags = flag_leaves(tree, plan, query);
  std::uint64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;

  HitCounts totals;
  for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
    std::uint64_t begin = chunk * kSampleChunk;
    std::uint64_t end = std::min(n, begin + kSampleChunk);
    HitCounts counts = count_chunk(plan, flags, seed, chunk, end - begin);
    totals.joint += counts.joint;
    totals.condition += counts.condition;
  }
  return finish_estimate(query, n, totals);
}

std::string to_json_envelope(const std::string& model_title, const std::string& query_text,
                             const SampleEstimate& estimate) {
  nlohmann::ordered_json doc;
  doc["model"] = model_title;
  doc["query"] = query_text;
  Prob ratio(BigRational(BigInt(estimate.hits), BigInt(std::max<std::uint64_t>(estimate.n, 1))));
  doc["value"] = {{"num", std::to_string(estimate.hits)},
                  {"den", std::to_string(estimate.n)},
                  {"decimal", ratio.decimal_str(12)}};
  doc["matched"] = nlohmann::ordered_json::array();
  doc["condition_matched"] = nlohmann::ordered_json::array();
  doc["warnings"] = nlohmann::ordered_json::array();
  doc["n"] = estimate.n;
  doc["hits"] = estimate.hits;
  doc["stderr"] = estimate.standard_error;
  return doc.dump();
}

std::string to_json_envelope(const std::string& model_title, const EquivalenceReport& report,
                             bool short_names) {
  nlohmann::ordered_json doc;
  doc["model"] = model_title;
  doc["query"] = "check-equivalence";
  doc["value"] = {{"num", report.max_discrepancy.numerator().str()},
                  {"den", report.max_discrepancy.denominator().str()},
                  {"decimal", report.max_discrepancy.decimal_str(12)}};
  doc["matched"] = nlohmann::ordered_json::array();
  doc["condition_matched"] = nlohmann::ordered_json::array();
  auto warnings = nlohmann::ordered_json::array();
  for (const EquivalenceViolation& violation : report.violations)
    warnings.push_back("area " + violation.area_fraction.fraction_str() +
                       " ≠ path product " + violation.path_product.fraction_str() +
                       " at " + format_label(violation.node_path, short_names));
  doc["warnings"] = std::move(warnings);
  doc["checked_nodes"] = report.checked_nodes;
  return doc.dump();
}

}  // namespace turtleglyph
