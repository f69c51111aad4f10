// Finite-dimensional approximants of the fixed-point algebra of a relative
// graph: block decompositions indexed by defect and full projections, the
// expansion of vertex classes into stage-k blocks, the vanishing conditions
// that characterize the kernel of the class map, the constructive preimage
// recursion, and Bratteli diagrams of the stage inclusions.

#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "graphk/bigint.hpp"
#include "graphk/graph.hpp"
#include "graphk/zmodule.hpp"

namespace graphk {

enum class DefectKind { Defect, Full };

// A stage-k block label: [zeta_j xi_y] (defect, only at y outside the
// relative set) or [zeta_k s_y] (full).
struct DefectBasisElement {
  DefectKind kind;
  std::int64_t level;
  std::string vertex;

  friend bool operator==(const DefectBasisElement& a, const DefectBasisElement& b) {
    return a.kind == b.kind && a.level == b.level && a.vertex == b.vertex;
  }
  friend bool operator<(const DefectBasisElement& a, const DefectBasisElement& b) {
    return std::tie(a.kind, a.level, a.vertex) < std::tie(b.kind, b.level, b.vertex);
  }
};

class DefectCombination {
 public:
  DefectCombination() = default;

  const std::map<DefectBasisElement, Int>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Int coeff(const DefectBasisElement& e) const {
    auto it = c_.find(e);
    return it == c_.end() ? Int(0) : it->second;
  }

  void add(const DefectBasisElement& e, const Int& c) {
    if (c == 0) return;
    auto [it, fresh] = c_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) c_.erase(it);
    }
  }

  DefectCombination& operator+=(const DefectCombination& o) {
    for (const auto& [e, c] : o.c_) add(e, c);
    return *this;
  }
  DefectCombination& operator-=(const DefectCombination& o) {
    for (const auto& [e, c] : o.c_) add(e, -c);
    return *this;
  }
  friend DefectCombination operator+(DefectCombination a, const DefectCombination& b) {
    return a += b;
  }
  friend DefectCombination operator-(DefectCombination a, const DefectCombination& b) {
    return a -= b;
  }
  friend DefectCombination operator*(const Int& k, const DefectCombination& x) {
    DefectCombination r;
    if (k != 0)
      for (const auto& [e, c] : x.c_) r.c_.emplace(e, k * c);
    return r;
  }

  bool operator==(const DefectCombination& o) const { return c_ == o.c_; }
  bool operator!=(const DefectCombination& o) const { return !(*this == o); }

 private:
  std::map<DefectBasisElement, Int> c_;  // nonzero coefficients only
};

struct CkBlock {
  DefectBasisElement element;
  Int size;  // number of paths of the element's level ending at its vertex
};

namespace detail {
// sizes[j](y) = number of length-j paths ending at y, for j = 0..k:
// iterated column sums of the incidence matrix, via the flow on the
// all-ones vector.
inline std::vector<Level0Vector> path_counts_into(const Graph& g, std::int64_t k) {
  Level0Vector w;
  for (const auto& v : g.vertices()) w.add(v, 1);
  std::vector<Level0Vector> sizes;
  sizes.push_back(w);
  for (std::int64_t j = 0; j < k; ++j) {
    w = propagate(g, w);
    sizes.push_back(w);
  }
  return sizes;
}

inline void require_stage_support(const RelativeGraph& rg, const LevelledVector& g,
                                  std::int64_t k, const char* op) {
  for (const auto& [key, c] : g.coeffs()) {
    if (!rg.graph.has_vertex(key.second))
      throw std::invalid_argument(std::string(op) + ": unknown vertex '" +
                                  key.second + "'");
    if (key.first < 0 || key.first > k)
      throw std::invalid_argument(std::string(op) + ": support at level " +
                                  std::to_string(key.first) +
                                  " lies outside [0, " + std::to_string(k) + "]");
  }
}
}  // namespace detail

// The blocks of the stage-k algebra: defect blocks (j, y) for 0 <= j < k at
// vertices outside the relative set, and full blocks (k, y) at every vertex.
// Blocks with zero size are kept so the enumeration is uniform in k.
inline std::vector<CkBlock> ck_blocks(const RelativeGraph& rg, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("ck_blocks: negative cutoff");
  auto sizes = detail::path_counts_into(rg.graph, k);
  std::vector<CkBlock> blocks;
  for (std::int64_t j = 0; j < k; ++j)
    for (const auto& y : rg.graph.vertices())
      if (!rg.relative.count(y))
        blocks.push_back({{DefectKind::Defect, j, y}, sizes[j].coeff(y)});
  for (const auto& y : rg.graph.vertices())
    blocks.push_back({{DefectKind::Full, k, y}, sizes[k].coeff(y)});
  return blocks;
}

inline Int ck_dimension(const RelativeGraph& rg, std::int64_t k) {
  Int dim = 0;
  for (const auto& b : ck_blocks(rg, k)) dim += b.size * b.size;
  return dim;
}

// Expansion of the class [zeta_n s_x] in the stage-k blocks: defect terms
// with coefficient M^{j-n}(x, y) at levels n <= j < k (at vertices outside
// the relative set, where the defect projection is nonzero), and full terms
// with coefficient M^{k-n}(x, y).
inline DefectCombination expand_class(const RelativeGraph& rg, const std::string& x,
                                      std::int64_t n, std::int64_t k) {
  if (!rg.graph.has_vertex(x))
    throw std::invalid_argument("expand_class: unknown vertex '" + x + "'");
  if (n < 0 || n > k)
    throw std::invalid_argument("expand_class: level " + std::to_string(n) +
                                " lies outside [0, " + std::to_string(k) + "]");
  DefectCombination out;
  Level0Vector w = Level0Vector::delta(x);
  for (std::int64_t j = n; j < k; ++j) {
    for (const auto& [y, c] : w.coeffs())
      if (!rg.relative.count(y)) out.add({DefectKind::Defect, j, y}, c);
    w = propagate(rg.graph, w);
  }
  for (const auto& [y, c] : w.coeffs()) out.add({DefectKind::Full, k, y}, c);
  return out;
}

// The class map on a vector supported in levels [0, k]: the sum of the
// expansions of its deltas.
inline DefectCombination phi_eval(const RelativeGraph& rg, const LevelledVector& g,
                                  std::int64_t k) {
  if (k < 0) throw std::invalid_argument("phi_eval: negative cutoff");
  detail::require_stage_support(rg, g, k, "phi_eval");
  DefectCombination out;
  for (const auto& [key, c] : g.coeffs())
    out += c * expand_class(rg, key.second, key.first, k);
  return out;
}

// The vanishing conditions equivalent to phi_eval = 0, computed through the
// running recursion t_j = g_j + flow(t_{j-1}) instead of per-delta
// expansions: t_j must vanish outside the relative set for j < k, and t_k
// must vanish everywhere.
inline bool kernel_conditions(const RelativeGraph& rg, const LevelledVector& g,
                              std::int64_t k) {
  if (k < 0) throw std::invalid_argument("kernel_conditions: negative cutoff");
  detail::require_stage_support(rg, g, k, "kernel_conditions");
  Level0Vector t;
  for (std::int64_t j = 0; j < k; ++j) {
    t = g.slice(j) + propagate(rg.graph, t);
    if (!t.supported_in(rg.relative)) return false;
  }
  t = g.slice(k) + propagate(rg.graph, t);
  return t.is_zero();
}

// Constructive preimage under 1 - shift.flow for a vector satisfying the
// vanishing conditions: the slices are forced by h_i = g_i + flow(h_{i-1})
// and land in levels [0, k-1].  Requires every regular support vertex of g
// to lie in the relative set; the result is verified exactly.
inline LevelledVector build_h(const RelativeGraph& rg, const LevelledVector& g,
                              std::int64_t k) {
  if (k < 0) throw std::invalid_argument("build_h: negative cutoff");
  detail::require_stage_support(rg, g, k, "build_h");
  for (const auto& x : g.support_vertices()) {
    auto cls = classify_vertex(rg.graph, x);
    if (cls.kind == VertexKind::Regular && !rg.relative.count(x))
      throw std::invalid_argument("build_h: regular support vertex '" + x +
                                  "' lies outside the relative set");
  }

  LevelledVector h;
  Level0Vector prev;
  for (std::int64_t i = 0; i < k; ++i) {
    Level0Vector cur = g.slice(i) + propagate(rg.graph, prev);
    if (!cur.supported_in(rg.relative))
      throw std::runtime_error(
          "build_h: forced slice at level " + std::to_string(i) +
          " leaves the relative set; the vanishing conditions fail");
    h.add_slice(i, cur);
    prev = std::move(cur);
  }
  if (one_minus_shift_flow(rg, h) != g)
    throw std::runtime_error(
        "build_h: verification failed; the vanishing conditions fail at the top level");
  return h;
}

// Layered diagram of the inclusions of the stage algebras: layer i holds the
// stage-i blocks; a defect block persists with multiplicity 1, and a full
// block (i, y) feeds the new defect block at y (when the defect projection
// is nonzero there) and the full blocks (i+1, z) with multiplicity the
// number of edges y -> z.
struct BratteliDiagram {
  struct Edge {
    std::size_t layer;  // from layer -> layer + 1
    DefectBasisElement from;
    DefectBasisElement to;
    Int multiplicity;
  };
  std::vector<std::vector<CkBlock>> layers;
  std::vector<Edge> edges;
};

inline BratteliDiagram bratteli(const RelativeGraph& rg, std::int64_t kmax) {
  if (kmax < 1) throw std::invalid_argument("bratteli: cutoff must be at least 1");
  BratteliDiagram d;
  for (std::int64_t i = 0; i <= kmax; ++i) d.layers.push_back(ck_blocks(rg, i));
  for (std::int64_t i = 0; i < kmax; ++i) {
    auto layer = static_cast<std::size_t>(i);
    for (const auto& b : d.layers[layer]) {
      if (b.element.kind == DefectKind::Defect) {
        d.edges.push_back({layer, b.element, b.element, 1});
        continue;
      }
      const std::string& y = b.element.vertex;
      if (!rg.relative.count(y))
        d.edges.push_back({layer, b.element, {DefectKind::Defect, i, y}, 1});
      std::map<std::string, Int> fanout;  // terminus -> edge count
      for (std::size_t ei : rg.graph.out_edges(y))
        fanout[rg.graph.edge(ei).terminus] += 1;
      for (const auto& [z, mult] : fanout)
        d.edges.push_back({layer, b.element, {DefectKind::Full, i + 1, z}, mult});
    }
  }
  return d;
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

inline std::string dot_node_id(std::size_t layer, const DefectBasisElement& e) {
  std::ostringstream id;
  id << layer << ':' << (e.kind == DefectKind::Defect ? 'd' : 's') << ':'
     << e.level << ':' << e.vertex;
  return id.str();
}

inline std::string block_label(const DefectBasisElement& e, const Int& size) {
  std::ostringstream label;
  if (e.kind == DefectKind::Defect)
    label << "\xce\xbe(" << e.vertex << ")@" << e.level;
  else
    label << "s(" << e.vertex << ")@" << e.level;
  label << " : " << size;
  return label.str();
}
}  // namespace detail

inline std::string bratteli_dot(const BratteliDiagram& d) {
  std::ostringstream out;
  out << "digraph bratteli {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=box];\n";
  for (std::size_t i = 0; i < d.layers.size(); ++i) {
    out << "  subgraph cluster_" << i << " {\n";
    out << "    label=\"stage " << i << "\";\n";
    for (const auto& b : d.layers[i])
      out << "    \"" << detail::dot_escape(detail::dot_node_id(i, b.element))
          << "\" [label=\"" << detail::dot_escape(detail::block_label(b.element, b.size))
          << "\"];\n";
    out << "  }\n";
  }
  for (const auto& e : d.edges)
    out << "  \"" << detail::dot_escape(detail::dot_node_id(e.layer, e.from))
        << "\" -> \""
        << detail::dot_escape(detail::dot_node_id(e.layer + 1, e.to))
        << "\" [label=\"" << e.multiplicity << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace graphk
