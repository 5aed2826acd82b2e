#include "psig/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psig {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) fail(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

nlohmann::json graph_to_json(const PsiGraph& g) {
  json vertices = json::array();
  for (int v = 0; v < g.vertex_count(); ++v)
    vertices.push_back({{"id", v}, {"parity", g.parity[v] == Parity::ket ? "ket" : "bra"}});
  json edges = json::array();
  for (const Edge& e : g.edges)
    edges.push_back({{"u", e.u}, {"v", e.v}, {"label", e.label}});
  return {{"party_count", g.party_count}, {"vertices", vertices}, {"edges", edges}};
}

PsiGraph graph_from_json(const nlohmann::json& j) {
  PsiGraph g;
  g.party_count = int_field(j, "party_count");
  const json& vertices = field(j, "vertices");
  if (!vertices.is_array()) fail("'vertices' must be an array");
  g.parity.assign(vertices.size(), Parity::ket);
  std::vector<char> seen(vertices.size(), 0);
  for (const json& v : vertices) {
    const int id = int_field(v, "id");
    if (id < 0 || id >= static_cast<int>(vertices.size()) || seen[id])
      fail("vertex ids must cover 0..V-1 exactly once");
    seen[id] = 1;
    const json& parity = field(v, "parity");
    if (parity == "ket")
      g.parity[id] = Parity::ket;
    else if (parity == "bra")
      g.parity[id] = Parity::bra;
    else
      fail("vertex parity must be 'ket' or 'bra'");
  }
  const json& edges = field(j, "edges");
  if (!edges.is_array()) fail("'edges' must be an array");
  for (const json& e : edges)
    g.edges.push_back({int_field(e, "u"), int_field(e, "v"), int_field(e, "label")});
  return g;
}

nlohmann::json state_to_json(const PureState& s) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.amps.size(); ++i)
    amps.push_back({s.amps(i).real(), s.amps(i).imag()});
  return {{"dims", s.dims}, {"amps", amps}};
}

PureState state_from_json(const nlohmann::json& j) {
  PureState s;
  const json& dims = field(j, "dims");
  if (!dims.is_array() || dims.empty()) fail("'dims' must be a non-empty array");
  for (const json& d : dims) {
    if (!d.is_number_integer() || d.get<int>() < 1) fail("dimensions must be positive integers");
    s.dims.push_back(d.get<int>());
  }
  const json& amps = field(j, "amps");
  if (!amps.is_array()) fail("'amps' must be an array");
  s.amps.resize(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const json& a : amps) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      fail("each amplitude must be a [re, im] pair");
    s.amps(i++) = std::complex<double>(a[0].get<double>(), a[1].get<double>());
  }
  check_state(s);
  return s;
}

nlohmann::json certificate_to_json(const ConvexityCertificate& cert, const PsiGraph* graph) {
  json cuts = json::array();
  for (const auto& pc : cert.cuts) {
    cuts.push_back({{"involution", pc.cut.involution},
                    {"cut_edges", pc.cut.cut_edges},
                    {"right_items", pc.right_items},
                    {"matrix", pc.matrix}});
  }
  json out = {{"kind", cert.kind == ConvexityCertificate::Kind::edge ? "edge" : "vertex"},
              {"label", cert.label},
              {"cuts", cuts}};
  if (graph) out["graph"] = graph_to_json(*graph);
  return out;
}

LoadedCertificate certificate_from_json(const nlohmann::json& j) {
  LoadedCertificate loaded;
  if (j.contains("kind")) {
    const json& kind = j.at("kind");
    if (kind == "edge")
      loaded.cert.kind = ConvexityCertificate::Kind::edge;
    else if (kind == "vertex")
      loaded.cert.kind = ConvexityCertificate::Kind::vertex;
    else
      fail("certificate kind must be 'edge' or 'vertex'");
  }
  loaded.cert.label = int_field(j, "label");
  if (j.contains("graph")) loaded.graph = graph_from_json(j.at("graph"));

  const json& cuts = field(j, "cuts");
  if (!cuts.is_array()) fail("'cuts' must be an array");
  for (const json& c : cuts) {
    ConvexityCertificate::PerCut pc;
    const json& involution = field(c, "involution");
    if (!involution.is_array()) fail("'involution' must be an array");
    for (const json& x : involution) {
      if (!x.is_number_integer()) fail("involution entries must be integers");
      pc.cut.involution.push_back(x.get<int>());
    }
    for (const json& x : field(c, "cut_edges")) {
      if (!x.is_number_integer()) fail("cut_edges entries must be integers");
      pc.cut.cut_edges.push_back(x.get<int>());
    }
    for (const json& x : field(c, "right_items")) {
      if (!x.is_number_integer()) fail("right_items entries must be integers");
      pc.right_items.push_back(x.get<int>());
    }
    const json& matrix = field(c, "matrix");
    if (!matrix.is_array()) fail("'matrix' must be an array of rows");
    for (const json& row : matrix) {
      if (!row.is_array()) fail("matrix rows must be arrays");
      std::vector<double> r;
      for (const json& x : row) {
        if (!x.is_number()) fail("matrix entries must be numbers");
        r.push_back(x.get<double>());
      }
      pc.matrix.push_back(std::move(r));
    }
    loaded.cert.cuts.push_back(std::move(pc));
  }

  // Sides are derivable data, so files omit them; rebuild them when the file
  // carries its graph.  Standalone certificates get sides attached by the
  // caller once the target graph is known.
  if (loaded.graph) recompute_cut_sides(*loaded.graph, loaded.cert);
  return loaded;
}

FuzzSpecFile fuzz_spec_from_json(const nlohmann::json& j) {
  FuzzSpecFile file;
  const json& kind = field(j, "kind");
  if (kind == "vidal") {
    file.spec = vidal_spec(int_field(j, "party"), int_field(j, "k"));
  } else if (kind == "graph") {
    PsiGraph g = graph_from_json(field(j, "graph"));
    if (j.contains("exponent_num") || j.contains("exponent_den"))
      file.spec = graph_spec_with_exponent(std::move(g), int_field(j, "exponent_num"),
                                           int_field(j, "exponent_den"));
    else
      file.spec = graph_spec(std::move(g));
  } else if (kind == "multirenyi") {
    file.spec = multi_renyi_spec(int_field(j, "q"));
  } else if (kind == "cycle_family") {
    file.spec = cycle_family_spec(int_field(j, "n"));
  } else if (kind == "bl") {
    const json& ranks = field(j, "ranks");
    if (!ranks.is_array()) fail("'ranks' must be an array");
    std::vector<int> r;
    for (const json& x : ranks) {
      if (!x.is_number_integer()) fail("ranks must be integers");
      r.push_back(x.get<int>());
    }
    const int restarts = j.contains("restarts") ? int_field(j, "restarts") : 4;
    file.spec = bl_spec(std::move(r), restarts);
  } else {
    fail("unknown monotone kind");
  }
  if (j.contains("dims")) {
    const json& dims = j.at("dims");
    if (!dims.is_array()) fail("'dims' must be an array");
    for (const json& d : dims) {
      if (!d.is_number_integer() || d.get<int>() < 1)
        fail("dimensions must be positive integers");
      file.dims.push_back(d.get<int>());
    }
  }
  return file;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open file for writing: " + path);
  out << content;
}

}  // namespace psig
