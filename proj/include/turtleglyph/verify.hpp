#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "turtleglyph/engine.hpp"
#include "turtleglyph/layout.hpp"

namespace turtleglyph {

struct EquivalenceViolation {
  EventPath node_path;
  Prob area_fraction;
  Prob path_product;
};

/// Outcome of re-deriving every region's area fraction from the tree's edge
/// weights; clean means max_discrepancy == 0 and no violations.
struct EquivalenceReport {
  std::size_t checked_nodes = 0;
  Prob max_discrepancy;
  std::vector<EquivalenceViolation> violations;
};

/// Compares every region's angle_span against the exact path product.
/// Throws LayoutMismatchError when the layout's node set differs from the
/// tree's.
EquivalenceReport check_equivalence(const EventTree& tree, const TurtlebackLayout& layout);

/// Cell-level refinement test: every cell of `fine` extends exactly one cell
/// of `coarse`, and the cell masses aggregate exactly.
bool refinement_holds(const Partition& coarse, const Partition& fine);

/// True iff level_partition(k+1) refines level_partition(k) for every k up
/// to the tree depth.
bool check_refinement(const EventTree& tree);

struct SampleEstimate {
  std::uint64_t n = 0;     // condition hits for conditional queries, else the sample count
  std::uint64_t hits = 0;  // target (∧ condition) hits
  double estimate = 0.0;
  double standard_error = 0.0;  // sqrt(p̂(1−p̂)/n)
};

/// Root-to-leaf walks driven by a SplitMix64 stream. Samples are drawn in
/// fixed-size chunks, each chunk on its own substream derived from (seed,
/// chunk index), so results do not depend on thread count and repeat exactly
/// for a fixed seed. Edge weights are put over a common denominator per node
/// and sampled by rejection, so the walk is exact (no float bias).
std::vector<EventPath> sample_paths(const EventTree& tree, std::uint64_t n,
                                    std::uint64_t seed);

/// Monte Carlo estimate of a query; the OpenMP kernel. Conditional queries
/// divide target∧condition hits by condition hits and throw
/// NoConditionHitsError when the condition never occurred.
SampleEstimate estimate_query(const EventTree& tree, const Query& query, std::uint64_t n,
                              std::uint64_t seed);

/// Single-threaded reference walking the identical chunk schedule; kept for
/// testing and benchmarking against the parallel kernel. Agrees bit-for-bit.
SampleEstimate estimate_query_serial(const EventTree& tree, const Query& query,
                                     std::uint64_t n, std::uint64_t seed);

/// Same fixed envelope as query results; value carries hits/n, and the
/// sampling statistics ride along as extra fields.
std::string to_json_envelope(const std::string& model_title, const std::string& query_text,
                             const SampleEstimate& estimate);

/// Envelope for an equivalence report: value carries max_discrepancy and
/// each violation contributes one warning line.
std::string to_json_envelope(const std::string& model_title, const EquivalenceReport& report,
                             bool short_names);

}  // namespace turtleglyph
