// Text formats.
//
// Graph files are line oriented UTF-8.  '#' starts a comment, blank lines
// are skipped, and the remaining lines read
//
//   vertex <id> [inf]
//   edge <id> <origin> <terminus>
//
// with endpoints declared before the edges that use them.  Chain files are
// a sequence of `stage` blocks; vertex and edge lines accumulate, and
//
//   saturate <vertex-id>
//
// adds the vertex to the relative set of this and all later stages.  Within
// a block the additions apply first and the saturations second.  Matrix
// files carry `rows cols` on the first line and then row-major entries.

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphk/graph.hpp"

namespace graphk {

struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream in(body);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

// Mutable parse state shared by the graph and chain readers.
struct GraphBuilder {
  std::vector<std::string> vertices;
  std::set<std::string> vertex_set;
  std::set<std::string> infinite;
  std::vector<Edge> edges;
  std::set<std::string> edge_ids;

  void add_vertex(std::size_t line, const std::vector<std::string>& toks) {
    if (toks.size() < 2 || toks.size() > 3 || (toks.size() == 3 && toks[2] != "inf"))
      throw parse_error(line, "expected 'vertex <id> [inf]'");
    if (!vertex_set.insert(toks[1]).second)
      throw parse_error(line, "duplicate vertex '" + toks[1] + "'");
    vertices.push_back(toks[1]);
    if (toks.size() == 3) infinite.insert(toks[1]);
  }

  void add_edge(std::size_t line, const std::vector<std::string>& toks) {
    if (toks.size() != 4)
      throw parse_error(line, "expected 'edge <id> <origin> <terminus>'");
    if (!edge_ids.insert(toks[1]).second)
      throw parse_error(line, "duplicate edge '" + toks[1] + "'");
    if (!vertex_set.count(toks[2]))
      throw parse_error(line, "edge '" + toks[1] + "' uses undeclared vertex '" + toks[2] + "'");
    if (!vertex_set.count(toks[3]))
      throw parse_error(line, "edge '" + toks[1] + "' uses undeclared vertex '" + toks[3] + "'");
    edges.push_back(Edge{toks[1], toks[2], toks[3]});
  }

  Graph build() const { return Graph(vertices, infinite, edges); }
};

}  // namespace detail

inline Graph parse_graph(const std::string& text) {
  detail::GraphBuilder b;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    if (toks[0] == "vertex")
      b.add_vertex(lineno, toks);
    else if (toks[0] == "edge")
      b.add_edge(lineno, toks);
    else
      throw parse_error(lineno, "unknown directive '" + toks[0] + "'");
  }
  return b.build();
}

inline std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  for (const auto& v : g.vertices()) {
    out << "vertex " << v;
    if (g.flagged_infinite(v)) out << " inf";
    out << "\n";
  }
  for (const Edge& e : g.edges())
    out << "edge " << e.id << " " << e.origin << " " << e.terminus << "\n";
  return out.str();
}

inline Chain parse_chain(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  detail::GraphBuilder b;
  std::set<std::string> saturated;
  std::vector<RelativeGraph> stages;
  bool in_stage = false;
  // saturations requested in the current block, applied after its additions
  std::vector<std::pair<std::size_t, std::string>> pending;

  auto close_stage = [&]() {
    Graph g = b.build();
    for (const auto& [ln, v] : pending) {
      if (!g.has_vertex(v))
        throw parse_error(ln, "saturate names unknown vertex '" + v + "'");
      if (classify_vertex(g, v).kind != VertexKind::Regular)
        throw parse_error(ln, "saturate at non-regular vertex '" + v + "'");
      saturated.insert(v);
    }
    pending.clear();
    stages.emplace_back(std::move(g), saturated);
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    if (toks[0] == "stage") {
      if (toks.size() != 1) throw parse_error(lineno, "expected bare 'stage'");
      if (in_stage) close_stage();
      in_stage = true;
      continue;
    }
    if (!in_stage)
      throw parse_error(lineno, "'" + toks[0] + "' before the first stage");
    if (toks[0] == "vertex") {
      b.add_vertex(lineno, toks);
    } else if (toks[0] == "edge") {
      b.add_edge(lineno, toks);
      if (saturated.count(toks[2]))
        throw parse_error(lineno, "stage " + std::to_string(stages.size() + 1) +
                                      " adds an out-edge at saturated vertex '" +
                                      toks[2] + "'");
    } else if (toks[0] == "saturate") {
      if (toks.size() != 2) throw parse_error(lineno, "expected 'saturate <vertex-id>'");
      pending.emplace_back(lineno, toks[1]);
    } else {
      throw parse_error(lineno, "unknown directive '" + toks[0] + "'");
    }
  }
  if (in_stage) close_stage();
  if (stages.empty()) throw parse_error("chain file contains no stages");
  return Chain(std::move(stages));
}

inline std::string serialize_chain(const Chain& c) {
  std::ostringstream out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const RelativeGraph& cur = c.stage(k);
    const RelativeGraph* prev = k ? &c.stage(k - 1) : nullptr;
    out << "stage\n";
    for (const auto& v : cur.graph.vertices()) {
      if (prev && prev->graph.has_vertex(v)) continue;
      out << "vertex " << v;
      if (cur.graph.flagged_infinite(v)) out << " inf";
      out << "\n";
    }
    for (const Edge& e : cur.graph.edges()) {
      bool old = false;
      if (prev)
        for (const Edge& pe : prev->graph.edges())
          if (pe.id == e.id) {
            old = true;
            break;
          }
      if (!old) out << "edge " << e.id << " " << e.origin << " " << e.terminus << "\n";
    }
    for (const auto& v : cur.relative)
      if (!prev || !prev->relative.count(v)) out << "saturate " << v << "\n";
  }
  return out.str();
}

inline Matrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  long long rows = -1, cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw parse_error("matrix file must start with 'rows cols'");
  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (long long i = 0; i < rows; ++i)
    for (long long j = 0; j < cols; ++j) {
      std::string tok;
      if (!(in >> tok))
        throw parse_error("matrix file ends before all entries are given");
      try {
        m.at(i, j) = Int(tok);
      } catch (const std::exception&) {
        throw parse_error("bad matrix entry '" + tok + "'");
      }
    }
  std::string extra;
  if (in >> extra) throw parse_error("trailing content '" + extra + "' in matrix file");
  return m;
}

}  // namespace graphk
