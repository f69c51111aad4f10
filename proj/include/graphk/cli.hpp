// Command dispatch for the graphk tool.  Everything is routed through
// run(args) so tests can drive the full command surface in-process; output
// is deterministic byte for byte for identical inputs.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "graphk/afcore.hpp"
#include "graphk/graph.hpp"
#include "graphk/graph_io.hpp"
#include "graphk/ktheory.hpp"
#include "graphk/matrix.hpp"
#include "graphk/zmodule.hpp"

namespace graphk {

struct CommandResult {
  int code = 0;  // 0 success, 1 negative verdict, 2 input error
  std::string output;
};

namespace cli_detail {

inline std::string usage() {
  return
      "usage: graphk <command> [options]\n"
      "  classify <graph-file>\n"
      "  k <graph-file> [--toeplitz | --relative v1,v2,...]\n"
      "  limit <chain-file> [--window N]\n"
      "  bratteli <graph-file> -k <kmax> [--relative v1,v2,...] [--dot <path>]\n"
      "  snf <matrix-file>\n"
      "  check-lemmas <graph-file> --cases <n> --seed <s>\n";
}

inline CommandResult fail(const std::string& message) {
  return {2, "error: " + message + "\n"};
}

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline bool parse_number(const std::string& tok, std::int64_t& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// Flag-driven relative set: the default is the regular set, --toeplitz empties
// it, --relative pins it to the listed vertices, which must all be regular.
inline std::optional<RelativeGraph> make_relative(const Graph& g, bool toeplitz,
                                                  const std::optional<std::string>& csv,
                                                  CommandResult& err) {
  if (toeplitz && csv) {
    err = fail("--toeplitz and --relative are mutually exclusive");
    return std::nullopt;
  }
  if (toeplitz) return RelativeGraph(g, {});
  if (!csv) return RelativeGraph(g);
  std::set<std::string> rel;
  for (const auto& v : split_commas(*csv)) {
    if (!g.has_vertex(v)) {
      err = fail("--relative names unknown vertex '" + v + "'");
      return std::nullopt;
    }
    if (classify_vertex(g, v).kind != VertexKind::Regular) {
      err = fail("--relative names non-regular vertex '" + v + "'");
      return std::nullopt;
    }
    rel.insert(v);
  }
  return RelativeGraph(g, rel);
}

inline std::string block_name(const DefectBasisElement& e) {
  std::ostringstream out;
  out << (e.kind == DefectKind::Defect ? "\xce\xbe" : "s") << "(" << e.vertex
      << ")@" << e.level;
  return out.str();
}

inline std::string group_pair(const FgAbelianGroup& k0, const FgAbelianGroup& k1) {
  return "K0 = " + k0.type_string() + " | K1 = " + k1.type_string();
}

inline int rnd(std::mt19937_64& rng, int lo, int hi) {
  return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Level0Vector rnd_level0(std::mt19937_64& rng,
                               const std::vector<std::string>& verts, int max_terms,
                               int coeff_abs) {
  Level0Vector x;
  if (verts.empty()) return x;
  int terms = rnd(rng, 0, max_terms);
  for (int i = 0; i < terms; ++i)
    x.add(verts[rnd(rng, 0, static_cast<int>(verts.size()) - 1)],
          rnd(rng, -coeff_abs, coeff_abs));
  return x;
}

inline LevelledVector rnd_levelled(std::mt19937_64& rng,
                                   const std::vector<std::string>& verts,
                                   int max_terms, int lo, int hi, int coeff_abs) {
  LevelledVector f;
  if (verts.empty()) return f;
  int terms = rnd(rng, 0, max_terms);
  for (int i = 0; i < terms; ++i)
    f.add(verts[rnd(rng, 0, static_cast<int>(verts.size()) - 1)], rnd(rng, lo, hi),
          rnd(rng, -coeff_abs, coeff_abs));
  return f;
}

// ---- subcommands ----

inline CommandResult cmd_classify(const Graph& g) {
  std::ostringstream out;
  for (const auto& v : g.vertices()) {
    VertexClassification c = classify_vertex(g, v);
    out << v << ": " << vertex_kind_name(c.kind);
    if (c.source) out << ", source";
    out << "\n";
  }
  return {0, out.str()};
}

inline CommandResult cmd_k(const RelativeGraph& rg) {
  KGroups kg = kgroups(rg);
  return {0, render_group_lines("K0", kg.k0) + render_group_lines("K1", kg.k1)};
}

inline CommandResult cmd_limit(const Chain& chain, std::size_t window) {
  DirectLimitReport rep = direct_limit(chain, window);
  std::ostringstream out;
  std::size_t last = chain.size();
  out << "stages: " << last << "\n";
  for (std::size_t i = 0; i < rep.stages.size(); ++i)
    out << "stage " << i + 1 << ": "
        << group_pair(rep.stages[i].k0, rep.stages[i].k1) << "\n";
  out << "window: " << rep.window << " (stages " << last - rep.window << ".."
      << last - 1 << " against final stage " << last << ")\n";
  for (std::size_t i = 0; i < rep.images.size(); ++i)
    out << "image of stage " << i + 1 << " in stage " << last << ": "
        << group_pair(rep.images[i].k0, rep.images[i].k1) << "\n";
  if (rep.stabilized) {
    out << render_group_inline("K0", rep.k0) << "\n";
    out << render_group_inline("K1", rep.k1) << "\n";
  }
  out << "stabilized: " << (rep.stabilized ? "yes" : "no") << "\n";
  return {rep.stabilized ? 0 : 1, out.str()};
}

inline CommandResult cmd_bratteli(const RelativeGraph& rg, std::int64_t kmax,
                                  const std::optional<std::string>& dot_path) {
  BratteliDiagram d = bratteli(rg, kmax);
  std::ostringstream out;
  for (std::size_t i = 0; i < d.layers.size(); ++i) {
    out << "layer " << i << " (dimension "
        << ck_dimension(rg, static_cast<std::int64_t>(i)) << "):";
    bool first = true;
    for (const auto& b : d.layers[i]) {
      out << (first ? " " : " | ")
          << detail::block_label(b.element, b.size);
      first = false;
    }
    out << "\n";
  }
  for (const auto& e : d.edges)
    out << "edge: " << block_name(e.from) << " -> " << block_name(e.to) << " x"
        << e.multiplicity << "\n";
  if (dot_path) {
    std::ofstream dot(*dot_path, std::ios::binary);
    if (!dot) return fail("cannot write file '" + *dot_path + "'");
    dot << bratteli_dot(d);
    out << "dot written to " << *dot_path << "\n";
  }
  return {0, out.str()};
}

inline CommandResult cmd_snf(const Matrix& a) {
  SmithDecomposition s = smith(a);
  std::ostringstream out;
  out << "A: " << a.rows() << " x " << a.cols() << "\n";
  out << "D =\n";
  for (std::size_t i = 0; i < s.d.rows(); ++i) {
    for (std::size_t j = 0; j < s.d.cols(); ++j) {
      if (j) out << ' ';
      out << s.d.at(i, j);
    }
    out << "\n";
  }
  out << "invariant factors:";
  if (s.rank == 0) out << " (none)";
  for (std::size_t i = 0; i < s.rank; ++i) out << ' ' << s.diag(i);
  out << "\n";
  bool ok = s.u * a * s.vt == s.d;
  out << "U*A*Vt == D: " << (ok ? "yes" : "no") << "\n";
  return {ok ? 0 : 1, out.str()};
}

inline CommandResult cmd_check_lemmas(const Graph& g, std::int64_t cases,
                                      std::uint64_t seed) {
  RelativeGraph rg(g);
  const std::vector<std::string>& verts = g.vertices();
  std::vector<std::string> rel(rg.relative.begin(), rg.relative.end());
  std::mt19937_64 rng(seed);

  std::int64_t telescope_ok = 0, solver_ok = 0, member_ok = 0, kernel_ok = 0,
               vanish_ok = 0;
  for (std::int64_t it = 0; it < cases; ++it) {
    LevelledVector f = rnd_levelled(rng, verts, 8, -4, 4, 5);
    LevelledVector t = telescope(f);
    if (t - shift(t, -1) == f - embed(total(f))) ++telescope_ok;

    LevelledVector g0 = rnd_levelled(rng, verts, 6, -4, 4, 5);
    LevelledVector r = g0 - shift(g0, -1);
    if (total(r).is_zero() && solve_telescoping(r) == g0) ++solver_ok;

    LevelledVector h = rnd_levelled(rng, rel, 6, -3, 3, 4);
    IMembershipAnswer ans = is_in_i(rg, one_minus_shift_flow(rg, h));
    if (ans.yes() && ans.witness && *ans.witness == h) ++member_ok;

    std::int64_t k = rnd(rng, 1, 4);
    LevelledVector gv = rnd_levelled(rng, verts, 6, 0, static_cast<int>(k), 4);
    if (kernel_conditions(rg, gv, k) == phi_eval(rg, gv, k).is_zero()) ++kernel_ok;

    LevelledVector hw = rnd_levelled(rng, rel, 5, 0, static_cast<int>(k) - 1, 4);
    LevelledVector img = one_minus_shift_flow(rg, hw);
    if (phi_eval(rg, img, k).is_zero() && kernel_conditions(rg, img, k)) ++vanish_ok;
  }

  std::ostringstream out;
  out << "seed: " << seed << "\n";
  out << "cases: " << cases << "\n";
  out << "telescope identity: " << telescope_ok << "/" << cases << "\n";
  out << "telescoping solver roundtrip: " << solver_ok << "/" << cases << "\n";
  out << "membership roundtrip: " << member_ok << "/" << cases << "\n";
  out << "kernel conditions match the class map: " << kernel_ok << "/" << cases
      << "\n";
  out << "flow images vanish in the class map: " << vanish_ok << "/" << cases
      << "\n";
  bool pass = telescope_ok == cases && solver_ok == cases && member_ok == cases &&
              kernel_ok == cases && vanish_ok == cases;
  out << "result: " << (pass ? "pass" : "fail") << "\n";
  return {pass ? 0 : 1, out.str()};
}

}  // namespace cli_detail

inline CommandResult run(const std::vector<std::string>& args) {
  using namespace cli_detail;
  if (args.empty()) return {2, usage()};
  const std::string& cmd = args[0];

  // Collect one positional file argument plus recognized flags.
  std::optional<std::string> file;
  bool toeplitz = false;
  std::optional<std::string> relative_csv, dot_path;
  std::optional<std::int64_t> window, kmax, cases, seed;

  auto need_value = [&](std::size_t& i) -> std::optional<std::string> {
    if (i + 1 >= args.size()) return std::nullopt;
    return args[++i];
  };

  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    std::optional<std::string> v;
    std::int64_t n = 0;
    if (a == "--toeplitz") {
      toeplitz = true;
    } else if (a == "--relative") {
      if (!(v = need_value(i))) return fail("--relative expects a vertex list");
      relative_csv = *v;
    } else if (a == "--window") {
      if (!(v = need_value(i)) || !parse_number(*v, n) || n < 0)
        return fail("--window expects a nonnegative number");
      window = n;
    } else if (a == "-k") {
      if (!(v = need_value(i)) || !parse_number(*v, n))
        return fail("-k expects a number");
      kmax = n;
    } else if (a == "--dot") {
      if (!(v = need_value(i))) return fail("--dot expects a path");
      dot_path = *v;
    } else if (a == "--cases") {
      if (!(v = need_value(i)) || !parse_number(*v, n) || n < 0)
        return fail("--cases expects a nonnegative number");
      cases = n;
    } else if (a == "--seed") {
      if (!(v = need_value(i)) || !parse_number(*v, n) || n < 0)
        return fail("--seed expects a nonnegative number");
      seed = n;
    } else if (!a.empty() && a[0] == '-') {
      return {2, "error: unknown flag '" + a + "'\n" + usage()};
    } else if (!file) {
      file = a;
    } else {
      return {2, "error: unexpected argument '" + a + "'\n" + usage()};
    }
  }

  if (cmd != "classify" && cmd != "k" && cmd != "limit" && cmd != "bratteli" &&
      cmd != "snf" && cmd != "check-lemmas")
    return {2, "error: unknown command '" + cmd + "'\n" + usage()};

  // Flags are only legal on the commands that define them.
  auto reject = [&](bool present, const char* flag) -> std::optional<CommandResult> {
    if (present)
      return CommandResult{2, "error: flag " + std::string(flag) +
                                  " is not valid for '" + cmd + "'\n" + usage()};
    return std::nullopt;
  };
  if (cmd != "k")
    if (auto r = reject(toeplitz, "--toeplitz")) return *r;
  if (cmd != "k" && cmd != "bratteli")
    if (auto r = reject(relative_csv.has_value(), "--relative")) return *r;
  if (cmd != "limit")
    if (auto r = reject(window.has_value(), "--window")) return *r;
  if (cmd != "bratteli") {
    if (auto r = reject(kmax.has_value(), "-k")) return *r;
    if (auto r = reject(dot_path.has_value(), "--dot")) return *r;
  }
  if (cmd != "check-lemmas") {
    if (auto r = reject(cases.has_value(), "--cases")) return *r;
    if (auto r = reject(seed.has_value(), "--seed")) return *r;
  }

  if (!file) return {2, "error: missing input file\n" + usage()};
  std::optional<std::string> text = read_file(*file);
  if (!text) return fail("cannot read file '" + *file + "'");

  try {
    if (cmd == "classify") return cmd_classify(parse_graph(*text));

    if (cmd == "k") {
      Graph g = parse_graph(*text);
      CommandResult err;
      auto rg = make_relative(g, toeplitz, relative_csv, err);
      if (!rg) return err;
      return cmd_k(*rg);
    }

    if (cmd == "limit")
      return cmd_limit(parse_chain(*text),
                       static_cast<std::size_t>(window.value_or(3)));

    if (cmd == "bratteli") {
      if (!kmax) return fail("bratteli requires -k <kmax>");
      Graph g = parse_graph(*text);
      CommandResult err;
      auto rg = make_relative(g, false, relative_csv, err);
      if (!rg) return err;
      return cmd_bratteli(*rg, *kmax, dot_path);
    }

    if (cmd == "snf") return cmd_snf(parse_matrix(*text));

    // check-lemmas
    if (!cases || !seed) return fail("check-lemmas requires --cases and --seed");
    return cmd_check_lemmas(parse_graph(*text), *cases,
                            static_cast<std::uint64_t>(*seed));
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

}  // namespace graphk
