// Finitely supported integer vectors over (vertex, level) pairs and the
// operator identities between them that the K-group computation leans on:
// the level shift, the edge flow, level projections, the total map and its
// level-zero section, the telescoping operator, and a three-valued decision
// procedure for membership in the image of (1 - shift*flow).

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graphk/bigint.hpp"
#include "graphk/graph.hpp"

namespace graphk {

class Level0Vector {
 public:
  Level0Vector() = default;
  explicit Level0Vector(std::map<std::string, Int> coeffs) {
    for (auto& [v, c] : coeffs)
      if (c != 0) c_.emplace(v, std::move(c));
  }

  static Level0Vector delta(const std::string& v, Int c = Int(1)) {
    Level0Vector x;
    x.add(v, c);
    return x;
  }

  const std::map<std::string, Int>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Int coeff(const std::string& v) const {
    auto it = c_.find(v);
    return it == c_.end() ? Int(0) : it->second;
  }

  void add(const std::string& v, const Int& c) {
    if (c == 0) return;
    auto [it, fresh] = c_.emplace(v, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) c_.erase(it);
    }
  }

  Level0Vector& operator+=(const Level0Vector& o) {
    for (const auto& [v, c] : o.c_) add(v, c);
    return *this;
  }
  Level0Vector& operator-=(const Level0Vector& o) {
    for (const auto& [v, c] : o.c_) add(v, -c);
    return *this;
  }
  friend Level0Vector operator+(Level0Vector a, const Level0Vector& b) { return a += b; }
  friend Level0Vector operator-(Level0Vector a, const Level0Vector& b) { return a -= b; }
  friend Level0Vector operator*(const Int& k, const Level0Vector& x) {
    Level0Vector r;
    if (k != 0)
      for (const auto& [v, c] : x.c_) r.c_.emplace(v, k * c);
    return r;
  }
  Level0Vector operator-() const { return Int(-1) * *this; }

  bool operator==(const Level0Vector& o) const { return c_ == o.c_; }
  bool operator!=(const Level0Vector& o) const { return !(*this == o); }
  bool operator<(const Level0Vector& o) const { return c_ < o.c_; }

  bool supported_in(const std::set<std::string>& allowed) const {
    for (const auto& [v, c] : c_)
      if (!allowed.count(v)) return false;
    return true;
  }

 private:
  std::map<std::string, Int> c_;  // nonzero coefficients only
};

class LevelledVector {
 public:
  using Key = std::pair<std::int64_t, std::string>;  // (level, vertex)

  LevelledVector() = default;

  static LevelledVector delta(const std::string& v, std::int64_t level,
                              Int c = Int(1)) {
    LevelledVector x;
    x.add(v, level, c);
    return x;
  }

  const std::map<Key, Int>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Int coeff(const std::string& v, std::int64_t level) const {
    auto it = c_.find({level, v});
    return it == c_.end() ? Int(0) : it->second;
  }

  void add(const std::string& v, std::int64_t level, const Int& c) {
    if (c == 0) return;
    Key k{level, v};
    auto [it, fresh] = c_.emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) c_.erase(it);
    }
  }

  void add_slice(std::int64_t level, const Level0Vector& x) {
    for (const auto& [v, c] : x.coeffs()) add(v, level, c);
  }

  LevelledVector& operator+=(const LevelledVector& o) {
    for (const auto& [k, c] : o.c_) add(k.second, k.first, c);
    return *this;
  }
  LevelledVector& operator-=(const LevelledVector& o) {
    for (const auto& [k, c] : o.c_) add(k.second, k.first, -c);
    return *this;
  }
  friend LevelledVector operator+(LevelledVector a, const LevelledVector& b) { return a += b; }
  friend LevelledVector operator-(LevelledVector a, const LevelledVector& b) { return a -= b; }
  friend LevelledVector operator*(const Int& k, const LevelledVector& x) {
    LevelledVector r;
    if (k != 0)
      for (const auto& [key, c] : x.c_) r.c_.emplace(key, k * c);
    return r;
  }
  LevelledVector operator-() const { return Int(-1) * *this; }

  bool operator==(const LevelledVector& o) const { return c_ == o.c_; }
  bool operator!=(const LevelledVector& o) const { return !(*this == o); }

  // Bounds of the supported levels; only meaningful on nonzero vectors.
  std::int64_t min_level() const {
    if (c_.empty()) throw std::logic_error("min_level of the zero vector");
    return c_.begin()->first.first;
  }
  std::int64_t max_level() const {
    if (c_.empty()) throw std::logic_error("max_level of the zero vector");
    return c_.rbegin()->first.first;
  }

  Level0Vector slice(std::int64_t level) const {
    Level0Vector s;
    for (auto it = c_.lower_bound({level, ""});
         it != c_.end() && it->first.first == level; ++it)
      s.add(it->first.second, it->second);
    return s;
  }

  bool supported_in(const std::set<std::string>& allowed) const {
    for (const auto& [k, c] : c_)
      if (!allowed.count(k.second)) return false;
    return true;
  }

  std::set<std::string> support_vertices() const {
    std::set<std::string> s;
    for (const auto& [k, c] : c_) s.insert(k.second);
    return s;
  }

 private:
  std::map<Key, Int> c_;  // nonzero coefficients only
};

// ---- operators ----

// Level shift by j: the delta at level n moves to level n + j.
inline LevelledVector shift(const LevelledVector& f, std::int64_t j) {
  LevelledVector r;
  for (const auto& [k, c] : f.coeffs()) r.add(k.second, k.first + j, c);
  return r;
}

// Each delta flows along every listed out-edge of its vertex to the edge's
// terminus.  No domain restriction: this is the incidence-transpose action.
inline Level0Vector propagate(const Graph& g, const Level0Vector& x) {
  Level0Vector r;
  for (const auto& [v, c] : x.coeffs())
    for (std::size_t ei : g.out_edges(v)) r.add(g.edge(ei).terminus, c);
  return r;
}

namespace detail {
inline void require_relative_support(const RelativeGraph& rg,
                                     const std::set<std::string>& support,
                                     const char* op) {
  for (const auto& v : support) {
    if (!rg.graph.has_vertex(v))
      throw std::invalid_argument(std::string(op) + ": unknown vertex '" + v + "'");
    if (!rg.relative.count(v))
      throw std::invalid_argument(std::string(op) + ": support vertex '" + v +
                                  "' is outside the relative set");
  }
}
}  // namespace detail

// The edge flow on level-zero vectors supported in the relative set.
inline Level0Vector beta0(const RelativeGraph& rg, const Level0Vector& x) {
  std::set<std::string> s;
  for (const auto& [v, c] : x.coeffs()) s.insert(v);
  detail::require_relative_support(rg, s, "beta0");
  return propagate(rg.graph, x);
}

// The levelwise edge flow on levelled vectors supported in the relative set.
inline LevelledVector beta(const RelativeGraph& rg, const LevelledVector& f) {
  detail::require_relative_support(rg, f.support_vertices(), "beta");
  LevelledVector r;
  for (const auto& [k, c] : f.coeffs())
    for (std::size_t ei : rg.graph.out_edges(k.second))
      r.add(rg.graph.edge(ei).terminus, k.first, c);
  return r;
}

// Projection onto the single level i.
inline LevelledVector e_proj(const LevelledVector& f, std::int64_t i) {
  LevelledVector r;
  r.add_slice(i, f.slice(i));
  return r;
}

// Projection onto levels <= i.
inline LevelledVector q_proj(const LevelledVector& f, std::int64_t i) {
  LevelledVector r;
  for (const auto& [k, c] : f.coeffs())
    if (k.first <= i) r.add(k.second, k.first, c);
  return r;
}

// Sum of all slices.
inline Level0Vector total(const LevelledVector& f) {
  Level0Vector t;
  if (f.is_zero()) return t;
  for (std::int64_t i = f.min_level(); i <= f.max_level(); ++i) t += f.slice(i);
  return t;
}

// Place a level-zero vector at level 0; the section of `total`.
inline LevelledVector embed(const Level0Vector& x) {
  LevelledVector r;
  r.add_slice(0, x);
  return r;
}

// The telescoping operator
//   T = -sum_{j<0} shift^{-j} q_j  +  sum_{j>=0} shift^{-j} (1 - q_j),
// which satisfies (1 - shift^{-1}) T f = f - embed(total(f)) exactly.
inline LevelledVector telescope(const LevelledVector& f) {
  LevelledVector r;
  if (f.is_zero()) return r;
  for (std::int64_t j = f.min_level(); j < 0; ++j)
    r -= shift(q_proj(f, j), -j);
  for (std::int64_t j = 0; j < f.max_level(); ++j)
    r += shift(f - q_proj(f, j), -j);
  return r;
}

// Solve (1 - shift^{-1}) g = r for finitely supported g: the slice of g at
// level n is the sum of the slices of r at levels >= n.  Requires the slices
// of r to cancel overall.
inline LevelledVector solve_telescoping(const LevelledVector& r) {
  if (!total(r).is_zero())
    throw std::invalid_argument("solve_telescoping: slices do not cancel");
  LevelledVector g;
  if (r.is_zero()) return g;
  Level0Vector acc;
  for (std::int64_t n = r.max_level(); n >= r.min_level(); --n) {
    acc += r.slice(n);
    g.add_slice(n, acc);
  }
  return g;
}

// ---- membership in I = (1 - shift . flow)(W) ----

struct IMembershipAnswer {
  enum class Verdict { Yes, No, Unknown };
  enum class NoReason { SupportLeavesRelativeSet, ForcedCycle };

  Verdict verdict;
  std::optional<LevelledVector> witness;  // set exactly when verdict == Yes
  std::optional<NoReason> reason;         // set exactly when verdict == No

  bool yes() const { return verdict == Verdict::Yes; }
};

// Apply (1 - shift . flow) to a vector supported in the relative set.
inline LevelledVector one_minus_shift_flow(const RelativeGraph& rg,
                                           const LevelledVector& h) {
  return h - shift(beta(rg, h), 1);
}

// Decide whether v lies in the image of W = C_c(relative x Z) under
// (1 - shift . flow).  Writing v_i for the slices, any preimage h is forced
// slice by slice from below: h_i = v_i + flow(h_{i-1}).  The recursion
// either terminates in zero (member, with the witness returned), is forced
// to leave the relative set or to revisit a nonzero slice above the support
// (non-member), or runs past the iteration cap (unknown).
inline IMembershipAnswer is_in_i(const RelativeGraph& rg, const LevelledVector& v) {
  for (const auto& vert : v.support_vertices())
    if (!rg.graph.has_vertex(vert))
      throw std::invalid_argument("is_in_i: unknown vertex '" + vert + "'");
  IMembershipAnswer ans;
  if (v.is_zero()) {
    ans.verdict = IMembershipAnswer::Verdict::Yes;
    ans.witness = LevelledVector();
    return ans;
  }
  const std::int64_t lo = v.min_level(), hi = v.max_level();
  const std::int64_t cap =
      hi + static_cast<std::int64_t>(rg.graph.vertices().size()) + 64;

  LevelledVector witness;
  Level0Vector h_prev;
  std::set<Level0Vector> seen;  // nonzero tail slices, for cycle detection
  for (std::int64_t i = lo;; ++i) {
    Level0Vector h_i = v.slice(i) + propagate(rg.graph, h_prev);
    if (i >= hi && h_i.is_zero()) break;
    if (!h_i.supported_in(rg.relative)) {
      ans.verdict = IMembershipAnswer::Verdict::No;
      ans.reason = IMembershipAnswer::NoReason::SupportLeavesRelativeSet;
      return ans;
    }
    if (i > hi) {
      if (!seen.insert(h_i).second) {
        ans.verdict = IMembershipAnswer::Verdict::No;
        ans.reason = IMembershipAnswer::NoReason::ForcedCycle;
        return ans;
      }
    }
    if (i > cap) {
      ans.verdict = IMembershipAnswer::Verdict::Unknown;
      return ans;
    }
    witness.add_slice(i, h_i);
    h_prev = std::move(h_i);
  }

  if (one_minus_shift_flow(rg, witness) != v)
    throw std::logic_error("is_in_i: forced witness failed verification");
  ans.verdict = IMembershipAnswer::Verdict::Yes;
  ans.witness = std::move(witness);
  return ans;
}

inline IMembershipAnswer classes_equal_mod_i(const RelativeGraph& rg,
                                             const LevelledVector& u,
                                             const LevelledVector& v) {
  return is_in_i(rg, u - v);
}

}  // namespace graphk
