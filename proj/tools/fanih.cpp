// fanih: intersection cohomology of fans from the command line.
//
//   fanih ih FILE
//   fanih pairing FILE [--refine stellar|none] [--omega S]
//   fanih check duality|biduality|vanishing|rigidity|pd|hl|hr|perverse FILE
//   fanih decompose FILE [--refine stellar|none]
//   fanih simplicialize FILE
//
// Exit codes: 0 pass, 1 failed check, 2 input error.

#include "fanih/io.hpp"
#include "fanih/pairing.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

using namespace fanih;

namespace {

struct Options {
  std::string file;
  std::string kind;
  int max_degree = -1;
  std::string field;
  std::string omega = "1";
  std::string output = "structured";
  std::string refine = "stellar";
  bool timings = false;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Job {
  LoadedFan loaded;
  std::shared_ptr<const Fan> fan;
  int n = 0;
  int hi = 0;          // polynomial cutoff
  VolumeForm omega;
};

Job load(const Options& o) {
  FanFile f = read_fan_file(o.file);
  if (!o.field.empty()) {
    const Field want = Field::parse(o.field);
    if (!(want == f.field)) throw InputError("file field " + f.field.to_string() + " differs from --field " + o.field);
  }
  Job j;
  j.loaded = load_fan(f);
  j.fan = j.loaded.fan;
  j.n = static_cast<int>(j.fan->ambient_dim());
  j.hi = j.n + 1;
  if (o.max_degree >= 0) {
    if (o.max_degree < 2 * j.n + 2) throw InputError("--max-degree must be at least 2n+2 = " + std::to_string(2 * j.n + 2));
    j.hi = o.max_degree / 2;
  }
  j.omega.lambda = parse_scalar(o.omega, f.field);
  if (j.omega.lambda.sign() <= 0) throw InputError("--omega must be positive");
  return j;
}

void require_quasi_convex(const Fan& fan) {
  const QuasiConvexity q = is_quasi_convex(fan);
  if (!q) throw NotQuasiConvex("fan is not quasi-convex: " + q.reason);
}

/// Topological degree -> value, zeros dropped at the top.
Json degree_table(const std::vector<Index>& dims) {
  Json t = Json::object();
  std::size_t last = dims.size();
  while (last > 0 && dims[last - 1] == 0) --last;
  for (std::size_t k = 0; k < last; ++k) t[std::to_string(2 * k)] = std::to_string(dims[k]);
  return t;
}

std::vector<Index> reduced_dims(const DegreewiseModule& m, int top) {
  const Reduction r = reduction_mod_m(m);
  std::vector<Index> d;
  for (int k = 0; k <= top; ++k) d.push_back(r.dim(k));
  return d;
}

Json verdict(Json report, bool pass, const std::string& witness = {}) {
  report["verdict"] = pass ? "pass" : "fail";
  if (!pass && !witness.empty()) report["witness"] = witness;
  return report;
}

ConvexFunction psi_for(const Job& j) {
  if (j.loaded.psi) return convex_function(*j.fan, *j.loaded.psi);
  if (!j.loaded.vertices.empty()) return support_function(*j.fan, j.loaded.vertices);
  return strictly_convex_function(*j.fan);
}

Json cmd_ih(const Job& j) {
  const IHBases b = ih_bases(j.fan, j.hi);
  Json r;
  r["ih"] = degree_table(b.ih.dims());
  if (!j.fan->is_complete()) r["ih_relative"] = degree_table(b.ih_relative.dims());
  return r;
}

Json pairing_json(const PairingReport& p) {
  Json r;
  r["ih"] = degree_table(p.ih_dims);
  Json mats = Json::object();
  Json nd = Json::object();
  for (std::size_t q = 0; q < p.matrices.size(); ++q) {
    mats[std::to_string(2 * q)] = to_json(p.matrices[q]);
    nd[std::to_string(2 * q)] = static_cast<bool>(p.nondegenerate[q]);
  }
  r["matrices"] = std::move(mats);
  r["nondegenerate"] = std::move(nd);
  return r;
}

Json cmd_pairing(const Job& j, const Options& o, int& status) {
  require_quasi_convex(*j.fan);
  const PairingReport p =
      o.refine == "stellar" ? pairing_via_refinement(j.fan, j.omega, j.hi) : ih_pairing(j.fan, j.omega, j.hi);
  Json r;
  r["route"] = o.refine == "stellar" ? "refinement" : "duality";
  r["omega"] = to_json(j.omega.lambda);
  r.update(pairing_json(p));
  status = p.all_nondegenerate() ? 0 : 1;
  return verdict(std::move(r), status == 0, "degenerate pairing");
}

Json cmd_check(const Job& j, const std::string& kind, int& status) {
  Json r;
  r["check"] = kind;
  bool pass = false;
  std::string witness;
  const Fan& fan = *j.fan;
  if (kind == "perverse") {
    const PerversityReport p = is_perverse(minimal_extension(j.fan, j.hi));
    pass = p.perverse;
    witness = p.witness;
  } else if (kind == "vanishing") {
    const VanishingReport v = check_vanishing(minimal_extension(j.fan, j.hi));
    pass = v.holds;
    witness = v.witness;
  } else if (kind == "duality") {
    const FanSheaf e = minimal_extension(j.fan, j.hi);
    const PerversityReport p = verify_perverse_dual(e);
    pass = p.perverse;
    witness = p.witness;
    const DualSheaf d = dual_sheaf(e);
    for (int c = 0; c < fan.size() && pass; ++c) {
      for (int k = d.sheaf.lo; k <= e.hi && pass; ++k) {
        if (d.sheaf.stalk(c).dim(k) != e.stalk(c).dim(k)) {
          pass = false;
          witness = "dim (DE)^" + std::to_string(2 * k) + " differs from E at " + fan.describe(c);
        }
      }
      if (pass && !relative_dual_check(e, d, c)) {
        pass = false;
        witness = "relative sections of DE disagree at " + fan.describe(c);
      }
    }
    if (pass) {
      const DualityIsomorphism di = duality_isomorphism(e);
      r["iso_solution_dimension"] = di.solution_dimension;
    }
  } else if (kind == "biduality") {
    const BidualityReport b = biduality(minimal_extension(j.fan, j.hi));
    pass = static_cast<bool>(b);
    witness = b.witness;
  } else if (kind == "rigidity") {
    require_quasi_convex(fan);
    const Index d = rigidity_check(minimal_extension(j.fan, j.hi));
    r["dimension"] = d;
    pass = d == 1;
    witness = "endomorphism space has dimension " + std::to_string(d);
  } else if (kind == "pd") {
    require_quasi_convex(fan);
    const PairingReport p = ih_pairing(j.fan, j.omega, j.hi);
    r["ih"] = degree_table(p.ih_dims);
    pass = p.all_nondegenerate();
    for (int q = 0; q <= j.n && pass; ++q) {
      if (p.ih_dims[static_cast<std::size_t>(q)] != p.relative_dims[static_cast<std::size_t>(j.n - q)]) {
        pass = false;
        witness = "dim IH^" + std::to_string(2 * q) + " differs from its relative dual";
      }
    }
    if (!p.all_nondegenerate()) witness = "degenerate pairing";
  } else if (kind == "hl" || kind == "hr") {
    if (!fan.is_complete()) throw NotComplete("hard Lefschetz needs a complete fan");
    const ConvexFunction psi = psi_for(j);
    const PairingContext ctx = pairing_context(j.fan, j.omega, j.hi);
    const LefschetzReport l = hard_lefschetz_check(ctx, psi, kind == "hr");
    Json levels = Json::object();
    for (std::size_t q = 0; q < l.bijective.size(); ++q) {
      Json lv;
      lv["bijective"] = static_cast<bool>(l.bijective[q]);
      if (l.hodge_riemann_checked) lv["hodge_riemann"] = static_cast<bool>(l.hodge_riemann[q]);
      levels[std::to_string(2 * q)] = std::move(lv);
    }
    r["levels"] = std::move(levels);
    pass = l.passed();
    witness = l.witness;
  } else {
    throw InputError("unknown check '" + kind + "'");
  }
  status = pass ? 0 : 1;
  return verdict(std::move(r), pass, witness);
}

Json cmd_decompose(const Job& j, const Options& o, int& status) {
  Json r;
  Decomposition d;
  std::shared_ptr<const Fan> fine = j.fan;
  if (o.refine == "stellar") {
    const Refinement ref = simplicialize(j.fan);
    fine = ref.fan;
    d = decompose(pushforward(ref.map, structure_sheaf(ref.fan, j.hi)).sheaf);
    r["sheaf"] = "pushforward of the structure sheaf";
  } else {
    const FanSheaf a = structure_sheaf(j.fan, j.hi);
    const PerversityReport p = is_perverse(a);
    if (!p) {
      status = 1;
      r["sheaf"] = "structure sheaf";
      return verdict(std::move(r), false, "structure sheaf is not perverse: " + p.witness);
    }
    d = decompose(a);
    r["sheaf"] = "structure sheaf";
  }
  r["refined_maximal_cones"] = fine->maximal_cones().size();
  Json parts = Json::array();
  for (const auto& [cone, degrees] : d.multiplicities) {
    Json s;
    s["cone"] = j.fan->describe(cone);
    s["dim"] = j.fan->cone(cone).dim();
    Json deg = Json::array();
    for (int k : degrees) deg.push_back(2 * k);
    s["degrees"] = std::move(deg);
    parts.push_back(std::move(s));
  }
  r["summands"] = std::move(parts);
  r["isomorphism"] = d.isomorphism;
  status = d.isomorphism ? 0 : 1;
  return verdict(std::move(r), d.isomorphism, "assembled map is not bijective");
}

void render_table(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_table(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && j.front().is_array()) {
    out << prefix << ":\n";
    for (const auto& row : j) {
      out << "   ";
      for (const auto& x : row) out << " " << (x.is_string() ? x.get<std::string>() : x.dump());
      out << "\n";
    }
  } else if (j.is_array()) {
    out << prefix << ":";
    for (const auto& x : j) out << " " << (x.is_string() ? x.get<std::string>() : x.dump());
    out << "\n";
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial intersection cohomology of fans"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--max-degree", o.max_degree, "Top topological degree computed (default 2n+2)");
  app.add_option("--field", o.field, "Expected field: q or quad:d");
  app.add_option("--omega", o.omega, "Volume form scale")->capture_default_str();
  app.add_option("--output", o.output, "structured or table")->check(CLI::IsMember({"structured", "table"}));
  app.add_option("--refine", o.refine, "stellar or none")->check(CLI::IsMember({"stellar", "none"}));
  app.add_flag("--timings", o.timings, "Report wall-clock time (makes output nondeterministic)");

  auto* ih = app.add_subcommand("ih", "IH Betti numbers");
  ih->add_option("file", o.file)->required();
  auto* pairing = app.add_subcommand("pairing", "Intersection pairing on IH");
  pairing->add_option("file", o.file)->required();
  auto* check = app.add_subcommand("check", "Run a check");
  check->add_option("kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"duality", "biduality", "vanishing", "rigidity", "pd", "hl", "hr", "perverse"}));
  check->add_option("file", o.file)->required();
  auto* dec = app.add_subcommand("decompose", "Decomposition into simple sheaves");
  dec->add_option("file", o.file)->required();
  auto* simp = app.add_subcommand("simplicialize", "Simplicial refinement as a fan file");
  simp->add_option("file", o.file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  Json report;
  try {
    const Job j = load(o);
    if (simp->parsed()) {
      std::cout << write_fan_file(to_fan_file(*simplicialize(j.fan).fan));
      return 0;
    }
    report["file"] = std::filesystem::path(o.file).filename().string();
    report["dim"] = j.n;
    report["field"] = j.fan->field().to_string();
    if (ih->parsed()) report.update(cmd_ih(j));
    if (pairing->parsed()) report.update(cmd_pairing(j, o, status));
    if (check->parsed()) report.update(cmd_check(j, o.kind, status));
    if (dec->parsed()) report.update(cmd_decompose(j, o, status));
  } catch (const ParseError& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 2;
  } catch (const NotAFan& e) {
    std::cerr << "NotAFan: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "GeometryError: " << e.what() << "\n";
    return 2;
  } catch (const NotQuasiConvex& e) {
    std::cerr << "NotQuasiConvex: " << e.what() << "\n";
    return 2;
  } catch (const NotComplete& e) {
    std::cerr << "NotComplete: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FieldMismatch& e) {
    std::cerr << "FieldMismatch: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
  if (o.timings) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    report["timings"] = {{"total_ms", ms.count()}};
  }
  if (o.output == "table") {
    render_table(report, "", std::cout);
  } else {
    std::cout << report.dump(2) << "\n";
  }
  return status;
}
