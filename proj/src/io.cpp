#include "fanih/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace fanih {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct LineError {
  int line;
  [[noreturn]] void operator()(const std::string& what) const {
    throw ParseError("line " + std::to_string(line) + ": " + what);
  }
};

Vector parse_vector(const std::vector<std::string>& w, std::size_t from, const FanFile& f, const LineError& fail) {
  if (f.dim <= 0) fail("dim must come before coordinates");
  if (w.size() - from != static_cast<std::size_t>(f.dim)) {
    fail("expected " + std::to_string(f.dim) + " coordinates, got " + std::to_string(w.size() - from));
  }
  Vector v(f.dim);
  for (std::size_t i = from; i < w.size(); ++i) {
    Scalar x;
    try {
      x = parse_scalar(w[i], f.field);
    } catch (const std::exception& e) {
      fail(e.what());
    }
    if (!x.is_rational() && f.field.is_rational()) fail("irrational scalar '" + w[i] + "' in a rational file");
    v(static_cast<Index>(i - from)) = x;
  }
  return v;
}

int parse_int(const std::string& s, const LineError& fail) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) fail("bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail("bad integer '" + s + "'");
  }
}

std::string vector_text(const Vector& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) out += " " + to_string(v(i));
  return out;
}

}  // namespace

FanFile parse_fan_file(std::string_view text) {
  FanFile f;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  bool have_field = false;
  while (std::getline(in, line)) {
    ++number;
    const LineError fail{number};
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto w = words(line);
    if (w.empty()) continue;
    const std::string& key = w[0];
    if (key == "field") {
      if (w.size() != 2) fail("field takes one descriptor");
      try {
        f.field = Field::parse(w[1]);
      } catch (const std::exception& e) {
        fail(e.what());
      }
      have_field = true;
    } else if (key == "dim") {
      if (w.size() != 2 || f.dim != 0) fail("dim must be given once with one value");
      f.dim = parse_int(w[1], fail);
      if (f.dim <= 0) fail("dim must be positive");
    } else if (key == "ray") {
      if (w.size() < 2) fail("ray needs a name");
      if (std::find(f.ray_names.begin(), f.ray_names.end(), w[1]) != f.ray_names.end()) fail("duplicate ray " + w[1]);
      f.ray_names.push_back(w[1]);
      f.rays.push_back(parse_vector(w, 2, f, fail));
    } else if (key == "cone") {
      if (w.size() < 2) fail("empty cone");
      std::vector<int> c;
      for (std::size_t i = 1; i < w.size(); ++i) {
        const auto it = std::find(f.ray_names.begin(), f.ray_names.end(), w[i]);
        if (it == f.ray_names.end()) fail("unknown ray " + w[i]);
        c.push_back(static_cast<int>(it - f.ray_names.begin()));
      }
      f.cones.push_back(std::move(c));
    } else if (key == "vertex") {
      f.vertices.push_back(parse_vector(w, 1, f, fail));
    } else if (key == "polytope") {
      if (w.size() != 2 || (w[1] != "face" && w[1] != "normal")) fail("polytope must be 'face' or 'normal'");
      f.polytope = w[1];
    } else if (key == "psi") {
      if (w.size() < 2) fail("psi needs a cone number");
      const int c = parse_int(w[1], fail);
      if (f.psi.count(c)) fail("duplicate psi for cone " + w[1]);
      f.psi[c] = parse_vector(w, 2, f, fail);
    } else {
      fail("unknown keyword '" + key + "'");
    }
  }
  const LineError fail{number};
  if (!have_field) f.field = Field::rational();
  if (f.dim == 0) fail("missing dim");
  if (f.cones.empty() && f.vertices.empty()) fail("no cones and no polytope");
  if (!f.cones.empty() && !f.vertices.empty() && f.polytope.empty()) fail("vertices without a polytope line");
  if (!f.vertices.empty() && f.polytope.empty()) fail("vertices without a polytope line");
  if (f.vertices.empty() && !f.polytope.empty()) fail("polytope without vertices");
  if (!f.cones.empty() && !f.polytope.empty()) fail("give either cones or a polytope");
  const int count = static_cast<int>(f.polytope.empty() ? f.cones.size() : 0);
  for (const auto& [c, form] : f.psi) {
    if (!f.polytope.empty()) fail("psi is derived from the polytope");
    if (c < 0 || c >= count) fail("psi for cone " + std::to_string(c) + " out of range");
  }
  return f;
}

FanFile read_fan_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_fan_file(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string write_fan_file(const FanFile& f) {
  std::ostringstream out;
  out << "field " << f.field.to_string() << "\n";
  out << "dim " << f.dim << "\n";
  for (std::size_t i = 0; i < f.rays.size(); ++i) out << "ray " << f.ray_names[i] << vector_text(f.rays[i]) << "\n";
  for (const auto& c : f.cones) {
    out << "cone";
    for (int r : c) out << " " << f.ray_names[at(r)];
    out << "\n";
  }
  for (const auto& v : f.vertices) out << "vertex" << vector_text(v) << "\n";
  if (!f.polytope.empty()) out << "polytope " << f.polytope << "\n";
  for (const auto& [c, form] : f.psi) out << "psi " << c << vector_text(form) << "\n";
  return out.str();
}

std::vector<Vector> polytope_facets(const std::vector<Vector>& vertices) {
  const Index n = vertices.front().size();
  // polar cone {(y, t) : t - <v, y> >= 0}; its rays (y, t) give facets y / t
  Matrix a(static_cast<Index>(vertices.size()), n + 1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    a.row(static_cast<Index>(i)).head(n) = -vertices[i].transpose();
    a(static_cast<Index>(i), n) = Scalar(1);
  }
  if (fanih::rank<Scalar>(a) != n + 1) throw ParseError("polytope is not full-dimensional");
  const Matrix g = cone_generators(a);
  std::vector<Vector> facets;
  for (Index j = 0; j < g.cols(); ++j) {
    if (g(n, j).sign() <= 0) throw ParseError("polytope must contain the origin in its interior");
    facets.push_back(g.col(j).head(n) / g(n, j));
  }
  return facets;
}

LoadedFan load_fan(const FanFile& f) {
  LoadedFan out;
  std::vector<Cone> cones;
  std::vector<Vector> psi_forms;
  if (!f.polytope.empty()) {
    const auto facets = polytope_facets(f.vertices);
    const auto on = [](const Vector& v, const Vector& u) { return v.dot(u) == Scalar(1); };
    for (std::size_t i = 0; i < f.vertices.size(); ++i) {
      std::size_t count = 0;
      for (const auto& u : facets) count += on(f.vertices[i], u) ? 1 : 0;
      if (count < static_cast<std::size_t>(f.dim)) throw ParseError("point " + std::to_string(i) + " is not a vertex");
    }
    if (f.polytope == "face") {
      for (const auto& u : facets) {
        std::vector<Vector> gens;
        for (const auto& v : f.vertices) {
          if (on(v, u)) gens.push_back(v);
        }
        cones.push_back(build_cone(gens));
        psi_forms.push_back(u);
      }
    } else {
      for (const auto& v : f.vertices) {
        std::vector<Vector> gens;
        for (const auto& u : facets) {
          if (on(v, u)) gens.push_back(u);
        }
        cones.push_back(build_cone(gens));
        psi_forms.push_back(v);
      }
      out.vertices = f.vertices;
    }
  } else {
    for (std::size_t i = 0; i < f.cones.size(); ++i) {
      std::vector<Vector> gens;
      for (int r : f.cones[i]) gens.push_back(f.rays[at(r)]);
      try {
        cones.push_back(build_cone(gens));
      } catch (const GeometryError& e) {
        throw GeometryError("cone " + std::to_string(i) + ": " + e.what());
      }
    }
  }
  auto fan = std::make_shared<const Fan>(assemble_fan(cones, f.field));
  const auto cone_id = [&](const Cone& c) {
    Vector sum = Vector::Zero(f.dim);
    for (const auto& r : c.rays) sum += r;
    return fan->smallest_cone_containing(sum);
  };
  if (!psi_forms.empty()) {
    std::map<int, Vector> psi;
    for (std::size_t i = 0; i < cones.size(); ++i) psi[cone_id(cones[i])] = psi_forms[i];
    out.psi = std::move(psi);
  } else if (!f.psi.empty()) {
    std::map<int, Vector> psi;
    for (const auto& [c, form] : f.psi) psi[cone_id(cones[at(c)])] = form;
    out.psi = std::move(psi);
  }
  out.fan = std::move(fan);
  return out;
}

FanFile to_fan_file(const Fan& fan) {
  FanFile f;
  f.field = fan.field();
  f.dim = fan.ambient_dim();
  for (std::size_t i = 0; i < fan.rays().size(); ++i) {
    f.ray_names.push_back("r" + std::to_string(i));
    f.rays.push_back(fan.rays()[i]);
  }
  for (int sigma : fan.maximal_cones()) f.cones.push_back(fan.cone(sigma).rays);
  return f;
}

Json to_json(const Scalar& x) { return to_string(x); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fanih
