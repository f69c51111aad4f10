// K-groups of a relative graph from the level-zero flow: the kernel and
// cokernel of 1 - flow over the integers, presented as finitely generated
// abelian groups with named generators, plus the homomorphisms induced by
// chain inclusions and a windowed direct-limit report.

#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphk/bigint.hpp"
#include "graphk/graph.hpp"
#include "graphk/matrix.hpp"
#include "graphk/zmodule.hpp"

namespace graphk {

// ---- rendering ----

// "+2·d(v) −1·d(w)": positive terms first, each group in vertex order.  The
// sign marker for negative terms is U+2212 so it cannot be confused with a
// hyphen inside a vertex name.
inline std::string render_level0(const Level0Vector& x) {
  if (x.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  auto emit = [&](const char* sign, const std::string& v, const Int& c) {
    if (!first) out << ' ';
    first = false;
    out << sign << c << "\xc2\xb7" << "d(" << v << ")";
  };
  for (const auto& [v, c] : x.coeffs())
    if (c > 0) emit("+", v, c);
  for (const auto& [v, c] : x.coeffs())
    if (c < 0) emit("\xe2\x88\x92", v, -c);
  return out.str();
}

// Flip the sign so the lexicographically largest supported vertex carries a
// positive coefficient; generators are only determined up to sign.
inline Level0Vector normalize_generator_sign(const Level0Vector& x) {
  if (x.is_zero()) return x;
  if (x.coeffs().rbegin()->second < 0) return -x;
  return x;
}

inline std::string render_generator(const Level0Vector& x) {
  return render_level0(normalize_generator_sign(x));
}

// ---- groups ----

struct FgAbelianGroup {
  struct Generator {
    Level0Vector expr;  // representative over the named ambient basis
    Int order;          // 0 for infinite order
  };

  std::size_t free_rank = 0;
  std::vector<Int> torsion;           // invariant factors >= 2, divisibility chain
  std::vector<Generator> generators;  // free generators first, then torsion

  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  bool same_type(const FgAbelianGroup& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }

  // "Z^r (+) Z/d1 (+) ... (+) Z/dm", "0" when trivial.
  std::string type_string() const {
    if (trivial()) return "0";
    std::ostringstream out;
    bool first = true;
    auto sep = [&]() {
      if (!first) out << " (+) ";
      first = false;
    };
    if (free_rank == 1) {
      sep();
      out << "Z";
    } else if (free_rank > 1) {
      sep();
      out << "Z^" << free_rank;
    }
    for (const auto& d : torsion) {
      sep();
      out << "Z/" << d;
    }
    return out.str();
  }
};

// Multi-line form: the type line, then one generator per line.
inline std::string render_group_lines(const std::string& name,
                                      const FgAbelianGroup& g) {
  std::ostringstream out;
  out << name << " = " << g.type_string() << "\n";
  for (const auto& gen : g.generators) {
    if (gen.order == 0)
      out << "  generator: " << render_generator(gen.expr) << "\n";
    else
      out << "  generator (order " << gen.order
          << "): " << render_generator(gen.expr) << "\n";
  }
  return out.str();
}

// One-line form: "K1 = Z, generator: +1·d(1) −1·d(-1)".
inline std::string render_group_inline(const std::string& name,
                                       const FgAbelianGroup& g) {
  std::ostringstream out;
  out << name << " = " << g.type_string();
  if (!g.generators.empty()) {
    out << (g.generators.size() == 1 ? ", generator: " : ", generators: ");
    bool first = true;
    for (const auto& gen : g.generators) {
      if (!first) out << "; ";
      first = false;
      out << render_generator(gen.expr);
      if (gen.order != 0) out << " (order " << gen.order << ")";
    }
  }
  return out.str();
}

namespace detail {

inline Int mod_floor(const Int& a, const Int& m) { return a - m * fdiv(a, m); }

inline Matrix from_columns(std::size_t rows, const std::vector<std::vector<Int>>& cols) {
  Matrix a(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) a.at(i, j) = cols[j][i];
  return a;
}

inline Level0Vector named_vector(const std::vector<Int>& v,
                                 const std::vector<std::string>& names) {
  Level0Vector x;
  for (std::size_t i = 0; i < names.size(); ++i) x.add(names[i], v[i]);
  return x;
}

inline std::vector<Int> named_coordinates(const Level0Vector& x,
                                          const std::vector<std::string>& names) {
  std::vector<Int> v(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) v[i] = x.coeff(names[i]);
  return v;
}

// Smith diagonal positions that survive as generators of the cokernel:
// the free positions (rows past the rank) first, then the torsion positions
// with invariant factor at least 2.
inline std::vector<std::size_t> kept_coker_indices(const SmithDecomposition& s,
                                                   std::size_t rows) {
  std::vector<std::size_t> kept;
  for (std::size_t i = s.rank; i < rows; ++i) kept.push_back(i);
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.diag(i) >= 2) kept.push_back(i);
  return kept;
}

// The quotient of the free group on `names` by the column span of
// `relations`.
inline FgAbelianGroup quotient_group(const Matrix& relations,
                                     const std::vector<std::string>& names,
                                     const SmithDecomposition& s) {
  FgAbelianGroup g;
  std::size_t rows = relations.rows();
  g.free_rank = rows - s.rank;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.diag(i) >= 2) g.torsion.push_back(s.diag(i));
  for (std::size_t i : kept_coker_indices(s, rows)) {
    FgAbelianGroup::Generator gen;
    gen.expr = named_vector(s.u_inv.col(i), names);
    gen.order = i < s.rank ? s.diag(i) : Int(0);
    g.generators.push_back(std::move(gen));
  }
  return g;
}

// The free group on the columns of a (canonical-basis) lattice matrix.
inline FgAbelianGroup free_group_on(const Matrix& basis,
                                    const std::vector<std::string>& names) {
  FgAbelianGroup g;
  g.free_rank = basis.cols();
  for (std::size_t j = 0; j < basis.cols(); ++j)
    g.generators.push_back({named_vector(basis.col(j), names), Int(0)});
  return g;
}

}  // namespace detail

// ---- presentations from a relative graph ----

// Relation matrix of the level-zero flow: one column per relative vertex x,
// holding delta_x - flow(delta_x); rows over all vertices in sorted order.
inline Matrix b_matrix(const RelativeGraph& rg) {
  const auto& rows = rg.graph.vertices();
  std::vector<std::string> cols(rg.relative.begin(), rg.relative.end());
  Matrix b(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    Level0Vector d = Level0Vector::delta(cols[j]);
    Level0Vector col = d - propagate(rg.graph, d);
    for (const auto& [y, c] : col.coeffs()) b.at(rg.graph.vertex_index(y), j) = c;
  }
  return b;
}

struct KGroups {
  FgAbelianGroup k0;  // cokernel of the relation matrix
  FgAbelianGroup k1;  // kernel of the relation matrix, a free group
  std::vector<std::string> vertex_order;    // row names (all vertices)
  std::vector<std::string> relative_order;  // column names (relative set)
  Matrix relations;                         // b_matrix(rg)
  Matrix kernel;                            // canonical kernel basis (columns)
  SmithDecomposition smith_form;            // of `relations`
};

inline KGroups kgroups(const RelativeGraph& rg) {
  KGroups out;
  out.vertex_order = rg.graph.vertices();
  out.relative_order.assign(rg.relative.begin(), rg.relative.end());
  out.relations = b_matrix(rg);
  out.smith_form = smith(out.relations);
  out.kernel = kernel_basis(out.relations);
  out.k0 = detail::quotient_group(out.relations, out.vertex_order, out.smith_form);
  out.k1 = detail::free_group_on(out.kernel, out.relative_order);
  return out;
}

// ---- homomorphisms ----

struct GroupHom {
  Matrix on_generators;  // target-generator coordinates of each source generator
  bool injective = false;
  bool surjective = false;
};

namespace detail {
// Diagonal relation lattice of a presented group in its generator
// coordinates: one column per torsion generator.
inline Matrix generator_relations(const FgAbelianGroup& g) {
  std::vector<std::vector<Int>> cols;
  for (std::size_t j = 0; j < g.generators.size(); ++j) {
    if (g.generators[j].order == 0) continue;
    std::vector<Int> col(g.generators.size(), Int(0));
    col[j] = g.generators[j].order;
    cols.push_back(std::move(col));
  }
  return from_columns(g.generators.size(), cols);
}
}  // namespace detail

// Package a generator-coordinate matrix as a homomorphism: validates that
// torsion relations map to relations, reduces torsion coordinates, and
// decides injectivity and surjectivity exactly via lattice computations.
inline GroupHom make_hom(const FgAbelianGroup& src, const FgAbelianGroup& dst,
                         Matrix m) {
  if (m.rows() != dst.generators.size() || m.cols() != src.generators.size())
    throw std::invalid_argument("make_hom: generator matrix shape mismatch");

  // Well-definedness: order(src_j) * image_j must be a target relation.
  for (std::size_t j = 0; j < src.generators.size(); ++j) {
    const Int& o = src.generators[j].order;
    if (o == 0) continue;
    for (std::size_t i = 0; i < dst.generators.size(); ++i) {
      Int scaled = o * m.at(i, j);
      const Int& od = dst.generators[i].order;
      bool ok = od == 0 ? scaled == 0 : scaled % od == 0;
      if (!ok)
        throw std::logic_error("make_hom: generator image violates a relation");
    }
  }

  // Canonical torsion coordinates.
  for (std::size_t i = 0; i < dst.generators.size(); ++i) {
    const Int& od = dst.generators[i].order;
    if (od == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      m.at(i, j) = detail::mod_floor(m.at(i, j), od);
  }

  GroupHom h;
  Matrix lam_src = detail::generator_relations(src);
  Matrix lam_dst = detail::generator_relations(dst);

  // Surjective iff the images together with the target relations span the
  // full generator lattice.
  SmithDecomposition s = smith(Matrix::hcat(m, lam_dst));
  bool full = s.rank == dst.generators.size();
  for (std::size_t i = 0; full && i < s.rank; ++i)
    if (s.diag(i) != 1) full = false;
  h.surjective = full;

  // Injective iff the preimage of the target relation lattice is exactly the
  // source relation lattice: project the kernel of [m | relations] onto the
  // source coordinates and compare.
  Matrix paired = kernel_basis(Matrix::hcat(m, lam_dst));
  Matrix proj(src.generators.size(), paired.cols());
  for (std::size_t i = 0; i < proj.rows(); ++i)
    for (std::size_t j = 0; j < proj.cols(); ++j) proj.at(i, j) = paired.at(i, j);
  h.injective = lattices_equal(proj, lam_src);

  h.on_generators = std::move(m);
  return h;
}

// The maps induced by one chain inclusion on the two presentations.
struct StepMaps {
  GroupHom k0;
  GroupHom k1;
};

namespace detail {
// Coordinates of an embedded class in the target cokernel presentation.
inline std::vector<Int> coker_coordinates(const KGroups& target,
                                          const Level0Vector& v) {
  std::vector<Int> y =
      target.smith_form.u.apply(named_coordinates(v, target.vertex_order));
  auto kept = kept_coker_indices(target.smith_form, target.relations.rows());
  std::vector<Int> coords;
  coords.reserve(kept.size());
  for (std::size_t i : kept) coords.push_back(y[i]);
  return coords;
}
}  // namespace detail

// Maps induced by the stage inclusions of an admissible chain: on the
// cokernel side a vertex class maps to the class of the same vertex; on the
// kernel side a kernel vector extends by zeros.  Both directions are
// validated rather than assumed.
inline std::vector<StepMaps> induced_maps(const Chain& chain) {
  std::vector<StepMaps> out;
  if (chain.size() == 0) return out;
  std::vector<KGroups> pres;
  pres.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) pres.push_back(kgroups(chain.stage(i)));

  for (std::size_t step = 0; step + 1 < chain.size(); ++step) {
    const KGroups& a = pres[step];
    const KGroups& b = pres[step + 1];

    // Source relations must persist in the target lattice.
    for (std::size_t j = 0; j < a.relations.cols(); ++j) {
      Level0Vector rel = detail::named_vector(a.relations.col(j), a.vertex_order);
      if (!in_column_lattice(b.relations,
                             detail::named_coordinates(rel, b.vertex_order)))
        throw std::logic_error("induced_maps: a stage relation does not persist");
    }

    std::vector<std::vector<Int>> k0_cols;
    for (const auto& gen : a.k0.generators)
      k0_cols.push_back(detail::coker_coordinates(b, gen.expr));
    Matrix m0 = detail::from_columns(b.k0.generators.size(), k0_cols);

    std::vector<std::vector<Int>> k1_cols;
    for (std::size_t j = 0; j < a.kernel.cols(); ++j) {
      Level0Vector vec = detail::named_vector(a.kernel.col(j), a.relative_order);
      auto coords = solve(b.kernel, detail::named_coordinates(vec, b.relative_order));
      if (!coords)
        throw std::logic_error(
            "induced_maps: a kernel vector does not extend to the next stage");
      k1_cols.push_back(*coords);
    }
    Matrix m1 = detail::from_columns(b.k1.generators.size(), k1_cols);

    out.push_back({make_hom(a.k0, b.k0, std::move(m0)),
                   make_hom(a.k1, b.k1, std::move(m1))});
  }
  return out;
}

// ---- direct limit ----

// The subgroup of Z^names / colspan(relations) generated by the classes of
// the columns of `gens`.
inline FgAbelianGroup subgroup_of_quotient(const Matrix& gens, const Matrix& relations,
                                           const std::vector<std::string>& names) {
  Matrix basis = hnf_basis(Matrix::hcat(gens, relations));
  std::vector<std::vector<Int>> xcols;
  for (std::size_t j = 0; j < relations.cols(); ++j) {
    auto x = solve(basis, relations.col(j));
    if (!x) throw std::logic_error("subgroup_of_quotient: relation escapes the span");
    xcols.push_back(*x);
  }
  Matrix x = detail::from_columns(basis.cols(), xcols);
  SmithDecomposition s = smith(x);

  FgAbelianGroup g;
  g.free_rank = basis.cols() - s.rank;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.diag(i) >= 2) g.torsion.push_back(s.diag(i));
  Matrix reps = basis * s.u_inv;
  for (std::size_t i : detail::kept_coker_indices(s, basis.cols())) {
    FgAbelianGroup::Generator gen;
    gen.expr = detail::named_vector(reps.col(i), names);
    gen.order = i < s.rank ? s.diag(i) : Int(0);
    g.generators.push_back(std::move(gen));
  }
  return g;
}

// The image of one stage's K-groups inside the final stage.
struct StageImage {
  FgAbelianGroup k0;
  FgAbelianGroup k1;
  Matrix k0_lattice;  // span of the embedded vertex classes and final relations
  Matrix k1_lattice;  // span of the embedded kernel vectors
};

struct DirectLimitReport {
  std::vector<KGroups> stages;
  std::vector<StageImage> images;  // one per non-final stage
  std::size_t window = 0;
  bool stabilized = false;
  FgAbelianGroup k0;  // the common image groups, when stabilized
  FgAbelianGroup k1;
};

// Finite approximation of the limit along the chain: for each non-final
// stage N, the image of stage N in the final stage; the report declares
// stabilization when the last `window` of those images agree as subgroups
// (equal lattices, hence compatible isomorphisms onto a common image).
inline DirectLimitReport direct_limit(const Chain& chain, std::size_t window = 3) {
  if (window < 2) throw std::invalid_argument("direct_limit: window must be at least 2");
  if (chain.size() < window + 1)
    throw std::invalid_argument("direct_limit: chain must be longer than the window");

  DirectLimitReport rep;
  rep.window = window;
  for (std::size_t i = 0; i < chain.size(); ++i)
    rep.stages.push_back(kgroups(chain.stage(i)));
  const KGroups& fin = rep.stages.back();

  for (std::size_t n = 0; n + 1 < chain.size(); ++n) {
    const KGroups& st = rep.stages[n];
    StageImage img;

    std::vector<std::vector<Int>> deltas;
    for (const auto& x : st.vertex_order)
      deltas.push_back(
          detail::named_coordinates(Level0Vector::delta(x), fin.vertex_order));
    Matrix gens0 = detail::from_columns(fin.vertex_order.size(), deltas);
    img.k0_lattice = hnf_basis(Matrix::hcat(gens0, fin.relations));
    img.k0 = subgroup_of_quotient(gens0, fin.relations, fin.vertex_order);

    std::vector<std::vector<Int>> kers;
    for (std::size_t j = 0; j < st.kernel.cols(); ++j) {
      Level0Vector vec = detail::named_vector(st.kernel.col(j), st.relative_order);
      std::vector<Int> emb = detail::named_coordinates(vec, fin.relative_order);
      if (!in_column_lattice(fin.kernel, emb))
        throw std::logic_error(
            "direct_limit: a kernel vector does not extend to the final stage");
      kers.push_back(std::move(emb));
    }
    Matrix gens1 = detail::from_columns(fin.relative_order.size(), kers);
    img.k1_lattice = hnf_basis(gens1);
    img.k1 = detail::free_group_on(img.k1_lattice, fin.relative_order);

    rep.images.push_back(std::move(img));
  }

  rep.stabilized = true;
  std::size_t first = chain.size() - 1 - window;  // index into rep.images
  for (std::size_t n = first + 1; n < rep.images.size(); ++n) {
    if (rep.images[n].k0_lattice != rep.images[first].k0_lattice ||
        rep.images[n].k1_lattice != rep.images[first].k1_lattice)
      rep.stabilized = false;
  }
  if (rep.stabilized) {
    rep.k0 = rep.images.back().k0;
    rep.k1 = rep.images.back().k1;
  }
  return rep;
}

}  // namespace graphk
