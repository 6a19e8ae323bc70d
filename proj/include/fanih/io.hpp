#pragma once

// Text format for fans:
//
//   # comment
//   field q | quad:d
//   dim n
//   ray <name> <c_1> ... <c_n>
//   cone <ray name> ...
//   vertex <c_1> ... <c_n>        (polytope block, with "polytope face|normal")
//   psi <cone number> <l_1> ... <l_n>
//
// Cones are numbered from 0 in file order. A file lists either cones or a
// polytope; the polytope must contain the origin in its interior.

#include "fanih/fan.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fanih {

struct FanFile {
  Field field;
  Index dim = 0;
  std::vector<std::string> ray_names;
  std::vector<Vector> rays;
  std::vector<std::vector<int>> cones;       // indices into rays
  std::vector<Vector> vertices;
  std::string polytope;                      // "", "face" or "normal"
  std::map<int, Vector> psi;                 // cone number -> linear form
};

/// Throws ParseError naming the line.
FanFile parse_fan_file(std::string_view text);
FanFile read_fan_file(const std::filesystem::path& path);
std::string write_fan_file(const FanFile& file);

struct LoadedFan {
  std::shared_ptr<const Fan> fan;
  std::optional<std::map<int, Vector>> psi;  // fan cone id -> form
  std::vector<Vector> vertices;              // of the polytope whose normal fan this is, if any
};
/// Assembles the fan (from cones or from the polytope); propagates NotAFan.
LoadedFan load_fan(const FanFile& file);

/// Facet normals u of a polytope with the origin inside, scaled so u <= 1 on it.
std::vector<Vector> polytope_facets(const std::vector<Vector>& vertices);

/// A fan written back out, rays named r0, r1, ...
FanFile to_fan_file(const Fan& fan);

using Json = nlohmann::ordered_json;
Json to_json(const Scalar& x);
Json to_json(const Matrix& m);

}  // namespace fanih
