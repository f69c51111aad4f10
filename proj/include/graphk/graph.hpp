// Directed multigraphs with distinguished infinite-emitter vertices, the
// vertex classification driving everything else, incidence matrices, path
// enumeration, relative vertex sets, head extensions, and chains of growing
// relative graphs.
//
// Identifiers are opaque strings; wherever an ordering matters (matrix
// indexing, serialization) it is lexicographic by identifier.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphk/matrix.hpp"

namespace graphk {

struct Edge {
  std::string id, origin, terminus;
  bool operator==(const Edge& o) const {
    return id == o.id && origin == o.origin && terminus == o.terminus;
  }
};

class Graph {
 public:
  Graph() = default;

  // Vertices flagged in `infinite` emit edges beyond the ones listed; the
  // flag is what keeps them out of the regular set no matter how many edges
  // the description happens to list.
  Graph(const std::vector<std::string>& vertices,
        const std::set<std::string>& infinite, const std::vector<Edge>& edges) {
    for (const auto& v : vertices) {
      if (!vertex_index_.emplace(v, 0).second)
        throw std::invalid_argument("duplicate vertex '" + v + "'");
    }
    vertices_.assign(vertices.begin(), vertices.end());
    std::sort(vertices_.begin(), vertices_.end());
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      vertex_index_[vertices_[i]] = i;
    for (const auto& v : infinite) {
      if (!vertex_index_.count(v))
        throw std::invalid_argument("infinite-emitter flag on unknown vertex '" + v + "'");
    }
    infinite_ = infinite;
    edges_ = edges;
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (i > 0 && edges_[i - 1].id == e.id)
        throw std::invalid_argument("duplicate edge '" + e.id + "'");
      if (!vertex_index_.count(e.origin))
        throw std::invalid_argument("edge '" + e.id + "' has unknown origin '" + e.origin + "'");
      if (!vertex_index_.count(e.terminus))
        throw std::invalid_argument("edge '" + e.id + "' has unknown terminus '" + e.terminus + "'");
      out_[e.origin].push_back(i);
      in_[e.terminus].push_back(i);
    }
  }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::set<std::string>& infinite_emitters() const { return infinite_; }

  bool has_vertex(const std::string& v) const { return vertex_index_.count(v) > 0; }
  bool flagged_infinite(const std::string& v) const { return infinite_.count(v) > 0; }

  std::size_t vertex_index(const std::string& v) const {
    auto it = vertex_index_.find(v);
    if (it == vertex_index_.end())
      throw std::invalid_argument("unknown vertex '" + v + "'");
    return it->second;
  }

  // Edge indices in increasing edge-id order.
  const std::vector<std::size_t>& out_edges(const std::string& v) const {
    require_vertex(v);
    static const std::vector<std::size_t> none;
    auto it = out_.find(v);
    return it == out_.end() ? none : it->second;
  }
  const std::vector<std::size_t>& in_edges(const std::string& v) const {
    require_vertex(v);
    static const std::vector<std::size_t> none;
    auto it = in_.find(v);
    return it == in_.end() ? none : it->second;
  }

  const Edge& edge(std::size_t i) const { return edges_[i]; }

  bool operator==(const Graph& o) const {
    return vertices_ == o.vertices_ && infinite_ == o.infinite_ && edges_ == o.edges_;
  }

 private:
  void require_vertex(const std::string& v) const {
    if (!has_vertex(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
  }

  std::vector<std::string> vertices_;  // sorted
  std::set<std::string> infinite_;
  std::vector<Edge> edges_;  // sorted by id
  std::map<std::string, std::size_t> vertex_index_;
  std::map<std::string, std::vector<std::size_t>> out_, in_;
};

enum class VertexKind { Sink, Regular, InfiniteEmitter };

struct VertexClassification {
  VertexKind kind;
  bool source;  // no incoming edges; independent of the kind
};

inline VertexClassification classify_vertex(const Graph& g, const std::string& v) {
  VertexClassification c;
  c.source = g.in_edges(v).empty();
  if (g.flagged_infinite(v))
    c.kind = VertexKind::InfiniteEmitter;
  else if (g.out_edges(v).empty())
    c.kind = VertexKind::Sink;
  else
    c.kind = VertexKind::Regular;
  return c;
}

inline const char* vertex_kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::Sink: return "sink";
    case VertexKind::Regular: return "regular";
    default: return "infinite-emitter";
  }
}

// Vertices with finite nonempty out-edge sets: exactly the ones whose
// summation relation participates in the K-group presentations.
inline std::set<std::string> regular_set(const Graph& g) {
  std::set<std::string> s;
  for (const auto& v : g.vertices())
    if (classify_vertex(g, v).kind == VertexKind::Regular) s.insert(v);
  return s;
}

struct IncidenceMatrix {
  std::vector<std::string> vertices;  // lexicographic; indexes rows and columns
  Matrix m;                           // m(x, y) = number of listed edges x -> y
  std::set<std::string> infinite;    // rows that undercount the true emission
};

inline IncidenceMatrix incidence(const Graph& g) {
  IncidenceMatrix im;
  im.vertices = g.vertices();
  im.infinite = g.infinite_emitters();
  im.m = Matrix(im.vertices.size(), im.vertices.size());
  for (const Edge& e : g.edges())
    im.m.at(g.vertex_index(e.origin), g.vertex_index(e.terminus)) += 1;
  return im;
}

inline Matrix matrix_power(const Matrix& m, int j) {
  if (j < 0) throw std::invalid_argument("matrix_power: negative exponent");
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_power: not square");
  Matrix r = Matrix::identity(m.rows());
  for (int i = 0; i < j; ++i) r = r * m;
  return r;
}

struct Path {
  std::string origin, terminus;
  std::vector<std::string> edge_ids;  // in traversal order; empty for length 0
  std::size_t length() const { return edge_ids.size(); }
};

// All paths of length j starting at x, optionally restricted to a terminus.
inline std::vector<Path> enumerate_paths(
    const Graph& g, const std::string& x, int j,
    const std::optional<std::string>& terminus = std::nullopt) {
  if (j < 0) throw std::invalid_argument("enumerate_paths: negative length");
  g.vertex_index(x);
  if (terminus) g.vertex_index(*terminus);
  std::vector<Path> out;
  Path cur{x, x, {}};
  // depth-first over out-edges, which are id-sorted, so output order is fixed
  auto walk = [&](auto&& self, const std::string& at, int left) -> void {
    if (left == 0) {
      if (!terminus || at == *terminus) {
        cur.terminus = at;
        out.push_back(cur);
      }
      return;
    }
    for (std::size_t ei : g.out_edges(at)) {
      cur.edge_ids.push_back(g.edge(ei).id);
      self(self, g.edge(ei).terminus, left - 1);
      cur.edge_ids.pop_back();
    }
  };
  walk(walk, x, j);
  return out;
}

// A graph together with the set of vertices whose summation relation is
// imposed.  Every member of the set must be regular: finitely and nonemptily
// emitting, and not flagged.
struct RelativeGraph {
  Graph graph;
  std::set<std::string> relative;

  RelativeGraph() = default;
  explicit RelativeGraph(Graph g) : graph(std::move(g)) {
    relative = regular_set(graph);
  }
  RelativeGraph(Graph g, std::set<std::string> rel)
      : graph(std::move(g)), relative(std::move(rel)) {
    for (const auto& v : relative) {
      if (!graph.has_vertex(v))
        throw std::invalid_argument("relative set names unknown vertex '" + v + "'");
      if (classify_vertex(graph, v).kind != VertexKind::Regular)
        throw std::invalid_argument("relative set vertex '" + v + "' is not regular");
    }
  }
};

// Is f an id-wise subgraph of e (same endpoints for shared edge ids)?
inline bool is_subgraph(const Graph& e, const Graph& f) {
  for (const auto& v : f.vertices())
    if (!e.has_vertex(v)) return false;
  for (const Edge& fe : f.edges()) {
    bool found = false;
    for (const Edge& ee : e.edges())
      if (ee.id == fe.id) {
        found = ee.origin == fe.origin && ee.terminus == fe.terminus;
        break;
      }
    if (!found) return false;
  }
  return true;
}

// Vertices of f that are regular in e and keep their complete e-emission
// inside f.  These are the vertices whose relation survives the passage to
// the subgraph.
inline std::set<std::string> relative_set(const Graph& e, const Graph& f) {
  if (!is_subgraph(e, f))
    throw std::invalid_argument("relative_set: second graph is not a subgraph of the first");
  std::set<std::string> s;
  for (const auto& v : f.vertices()) {
    if (classify_vertex(e, v).kind != VertexKind::Regular) continue;
    std::set<std::string> eout, fout;
    for (std::size_t i : e.out_edges(v)) eout.insert(e.edge(i).id);
    for (std::size_t i : f.out_edges(v)) fout.insert(f.edge(i).id);
    if (eout == fout) s.insert(v);
  }
  return s;
}

namespace detail {
inline std::string fresh_name(const std::string& base,
                              const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 2;; ++i) {
    std::string c = base + std::to_string(i);
    if (!taken.count(c)) return c;
  }
}
}  // namespace detail

// Attach a new head: a fresh vertex with a single edge onto the source y.
// The K-groups of the result agree with those of the input.
inline Graph add_head(const Graph& g, const std::string& y) {
  g.vertex_index(y);
  if (!g.in_edges(y).empty())
    throw std::invalid_argument("add_head: vertex '" + y + "' is not a source");
  std::set<std::string> vnames(g.vertices().begin(), g.vertices().end());
  std::set<std::string> enames;
  for (const Edge& e : g.edges()) enames.insert(e.id);
  std::string w = detail::fresh_name("omega", vnames);
  std::string t = detail::fresh_name("theta", enames);
  std::vector<std::string> vs = g.vertices();
  vs.push_back(w);
  std::vector<Edge> es = g.edges();
  es.push_back(Edge{t, w, y});
  return Graph(vs, g.infinite_emitters(), es);
}

// A nondecreasing sequence of relative graphs.  Admissibility means: vertex
// and edge sets only grow, flags and relative sets only grow, flags never
// appear on pre-existing vertices, and once a vertex is in the relative set
// its out-edge set is frozen.
class Chain {
 public:
  Chain() = default;
  explicit Chain(std::vector<RelativeGraph> stages) : stages_(std::move(stages)) {
    for (std::size_t k = 1; k < stages_.size(); ++k) {
      const Graph& a = stages_[k - 1].graph;
      const Graph& b = stages_[k].graph;
      if (!is_subgraph(b, a))
        throw std::invalid_argument("chain stage " + std::to_string(k + 1) +
                                    " does not extend stage " + std::to_string(k));
      for (const auto& v : a.vertices())
        if (a.flagged_infinite(v) != b.flagged_infinite(v))
          throw std::invalid_argument("chain stage " + std::to_string(k + 1) +
                                      " changes the flag on vertex '" + v + "'");
      const auto& ra = stages_[k - 1].relative;
      const auto& rb = stages_[k].relative;
      for (const auto& v : ra) {
        if (!rb.count(v))
          throw std::invalid_argument("chain stage " + std::to_string(k + 1) +
                                      " drops vertex '" + v + "' from the relative set");
        if (b.out_edges(v).size() != a.out_edges(v).size())
          throw std::invalid_argument("chain stage " + std::to_string(k + 1) +
                                      " adds an out-edge at saturated vertex '" + v + "'");
      }
    }
  }

  const std::vector<RelativeGraph>& stages() const { return stages_; }
  std::size_t size() const { return stages_.size(); }
  const RelativeGraph& stage(std::size_t i) const { return stages_.at(i); }

 private:
  std::vector<RelativeGraph> stages_;
};

}  // namespace graphk
