#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "turtleglyph/event_tree.hpp"
#include "turtleglyph/textio.hpp"

namespace tgtest {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline turtleglyph::EventTree load_corpus_model(const std::string& name) {
  return turtleglyph::parse_model(read_file(std::string(TG_MODELS_DIR) + "/" + name));
}

// Deterministic generator for random valid trees (depth <= 5, branching <= 4,
// exact rational weights that sum to 1 at every node).
class RandomTreeGen {
 public:
  explicit RandomTreeGen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

  turtleglyph::EventTree tree(int max_depth = 5, int max_branch = 4) {
    turtleglyph::EventTree out;
    out.title = "random-" + std::to_string(below(1000000));
    int branch = 1 + static_cast<int>(below(static_cast<std::uint64_t>(max_branch)));
    grow(out.root_children, branch, 1, max_depth, max_branch);
    return out;
  }

 private:
  void grow(std::vector<turtleglyph::EventNode>& siblings, int count, int depth,
            int max_depth, int max_branch) {
    std::vector<turtleglyph::Prob> weights = split_unit(count);
    std::set<std::string> used;
    for (int i = 0; i < count; ++i) {
      turtleglyph::EventNode node;
      node.name = fresh_name(used);
      node.cond_prob = weights[static_cast<std::size_t>(i)];
      if (depth < max_depth && below(100) >= 35) {
        int kids = 1 + static_cast<int>(below(static_cast<std::uint64_t>(max_branch)));
        grow(node.children, kids, depth + 1, max_depth, max_branch);
      }
      siblings.push_back(std::move(node));
    }
  }

  // `count` positive rationals over a common denominator, summing to 1;
  // occasionally one extra zero-mass sibling to exercise zero spans.
  std::vector<turtleglyph::Prob> split_unit(int& count) {
    std::uint64_t denominator = static_cast<std::uint64_t>(count) + below(21);
    std::set<std::uint64_t> cuts;
    while (cuts.size() + 1 < static_cast<std::size_t>(count))
      cuts.insert(1 + below(denominator - 1));
    std::vector<turtleglyph::Prob> weights;
    std::uint64_t previous = 0;
    for (std::uint64_t cut : cuts) {
      weights.emplace_back(static_cast<std::int64_t>(cut - previous),
                           static_cast<std::int64_t>(denominator));
      previous = cut;
    }
    weights.emplace_back(static_cast<std::int64_t>(denominator - previous),
                         static_cast<std::int64_t>(denominator));
    if (below(100) < 5) {
      weights.push_back(turtleglyph::Prob::zero());
      ++count;
    }
    return weights;
  }

  std::string fresh_name(std::set<std::string>& used) {
    static const char* kLetters = "ABCDEFGHJKMNPQRSTUVWXYZ";
    for (;;) {
      std::string name(1, kLetters[below(23)]);
      std::uint64_t roll = below(100);
      if (roll < 10) name = "~" + name;
      else if (roll < 20) name += static_cast<char>('0' + below(10));
      if (used.insert(name).second) return name;
    }
  }

  std::uint64_t state_;
};

// Random positional pattern compatible with the tree's alphabet.
inline turtleglyph::Pattern random_pattern(RandomTreeGen& gen,
                                           const turtleglyph::EventTree& tree) {
  std::vector<turtleglyph::LeafAtom> atoms = turtleglyph::leaves(tree);
  const turtleglyph::EventPath& pick =
      atoms[gen.below(atoms.size())].label;
  std::size_t length = 1 + gen.below(pick.size());
  turtleglyph::Pattern pattern;
  for (std::size_t i = 0; i < length; ++i) {
    if (gen.below(100) < 45)
      pattern.segments.push_back(std::nullopt);
    else
      pattern.segments.emplace_back(pick[i]);
  }
  return pattern;
}

// --- SVG oracles -----------------------------------------------------------

// Sweep angles (degrees) recovered from the emitted sector arcs; a filled
// <circle> (a full-turn leaf) counts as 360.
inline std::vector<double> sector_sweeps_degrees(const std::string& svg) {
  std::vector<double> sweeps;
  std::size_t pos = 0;
  while ((pos = svg.find("<path d=\"M ", pos)) != std::string::npos) {
    std::size_t start = pos + 9;  // skip '<path d="'
    std::size_t end = svg.find('"', start);
    std::string d = svg.substr(start, end - start);
    std::istringstream in(d);
    std::string tok;
    std::vector<double> nums;
    std::vector<std::string> words;
    while (in >> tok) words.push_back(tok);
    // M cx cy L x0 y0 A r r 0 laf sweep x1 y1 Z
    if (words.size() >= 14 && words[0] == "M" && words[3] == "L" && words[6] == "A") {
      double cx = std::stod(words[1]), cy = std::stod(words[2]);
      double x0 = std::stod(words[4]), y0 = std::stod(words[5]);
      double x1 = std::stod(words[12]), y1 = std::stod(words[13]);
      double a0 = std::atan2(cy - y0, x0 - cx);
      double a1 = std::atan2(cy - y1, x1 - cx);
      double sweep = a1 - a0;
      const double tau = 2.0 * std::numbers::pi;
      while (sweep <= 0.0) sweep += tau;
      while (sweep > tau) sweep -= tau;
      sweeps.push_back(sweep * 180.0 / std::numbers::pi);
    }
    pos = end;
  }
  pos = 0;
  while ((pos = svg.find("<circle ", pos)) != std::string::npos) {
    std::size_t end = svg.find("/>", pos);
    std::string tag = svg.substr(pos, end - pos);
    if (tag.find("fill=\"#") != std::string::npos &&
        tag.find("stroke=") == std::string::npos)
      sweeps.push_back(360.0);
    pos = end;
  }
  return sweeps;
}

// Minimal well-formedness check for the SVG subset we emit: matched tags,
// quoted attributes, and no references to external resources.
inline bool xml_well_formed(const std::string& text, std::string* why = nullptr) {
  auto fail = [&](const std::string& message) {
    if (why) *why = message;
    return false;
  };
  if (text.find("href") != std::string::npos || text.find("<image") != std::string::npos)
    return fail("references an external resource");

  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      if (text[i] == '>') return fail("stray '>'");
      ++i;
      continue;
    }
    std::size_t close = i;
    bool in_quote = false;
    while (close < text.size() && (text[close] != '>' || in_quote)) {
      if (text[close] == '"') in_quote = !in_quote;
      ++close;
    }
    if (close == text.size()) return fail("unterminated tag");
    std::string tag = text.substr(i + 1, close - i - 1);
    if (!tag.empty() && tag.front() == '?') {
      // declaration
    } else if (!tag.empty() && tag.front() == '/') {
      std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name)
        return fail("mismatched closing tag '" + name + "'");
      stack.pop_back();
    } else if (!tag.empty() && tag.back() == '/') {
      // self-closing
    } else {
      std::size_t space = tag.find_first_of(" \t\n");
      stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
    }
    i = close + 1;
  }
  if (!stack.empty()) return fail("unclosed tag '" + stack.back() + "'");
  return true;
}

}  // namespace tgtest
