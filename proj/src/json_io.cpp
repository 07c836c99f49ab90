#include "flatbundle/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace flatbundle {

namespace {

void require_schema(const Json& j, const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected a JSON object");
  if (!j.contains("schema") || j.at("schema") != "1")
    throw InputError(what + ": missing or unsupported schema (want \"1\")");
}

void require_type(const Json& j, const std::string& type) {
  if (j.contains("type") && j.at("type") != type)
    throw InputError("expected type \"" + type + "\" but found \"" +
                     j.at("type").get<std::string>() + "\"");
}

}  // namespace

std::string simplex_key(const Simplex& s) {
  std::ostringstream out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out << ',';
    out << s[i];
  }
  return out.str();
}

Simplex simplex_from_key(const std::string& key) {
  Simplex s;
  std::istringstream in(key);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      s.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw InputError("bad simplex key \"" + key + "\"");
    }
  }
  if (s.empty()) throw InputError("empty simplex key");
  return s;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix: expected a nonempty array");
  const size_t rows = j.size();
  const size_t cols = j.at(0).size();
  CMatrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    const Json& row = j.at(r);
    if (!row.is_array() || row.size() != cols)
      throw InputError("matrix: ragged rows");
    for (size_t c = 0; c < cols; ++c) {
      const Json& z = row.at(c);
      if (!z.is_array() || z.size() != 2)
        throw InputError("matrix: entries must be [re, im] pairs");
      m(r, c) = Complexd(z.at(0).get<double>(), z.at(1).get<double>());
    }
  }
  return m;
}

Json sampled_to_json(const SampledUnitaryMap& f) {
  Json j;
  j["k"] = f.k;
  j["m"] = f.m;
  j["boundary_only"] = f.boundary_only;
  Json vals = Json::array();
  for (const auto& v : f.values) vals.push_back(matrix_to_json(v));
  j["values"] = std::move(vals);
  return j;
}

SampledUnitaryMap sampled_from_json(const Json& j) {
  SampledUnitaryMap f;
  try {
    f.k = j.at("k").get<int>();
    f.m = j.at("m").get<int>();
    f.boundary_only = j.value("boundary_only", false);
    for (const auto& v : j.at("values")) f.values.push_back(matrix_from_json(v));
  } catch (const Json::exception& e) {
    throw InputError(std::string("sampled map: ") + e.what());
  }
  if (f.k < 0 || f.m < 1) throw InputError("sampled map: bad dimensions");
  if (f.values.size() != f.points().size())
    throw InputError("sampled map: value count does not match the lattice");
  return f;
}

Json complex_to_json(const Complex& x) {
  Json j;
  j["schema"] = "1";
  j["type"] = "complex";
  Json simplices = Json::array();
  for (const auto& s : x.simplices) simplices.push_back(s);
  j["simplices"] = std::move(simplices);
  if (!x.orientation.empty()) {
    Json orient;
    for (const auto& [s, sign] : x.orientation) orient[simplex_key(s)] = sign;
    j["orientation"] = std::move(orient);
  }
  return j;
}

Complex complex_from_json(const Json& j) {
  require_schema(j, "complex");
  require_type(j, "complex");
  std::vector<Simplex> simplices;
  try {
    for (const auto& s : j.at("simplices"))
      simplices.push_back(s.get<Simplex>());
  } catch (const Json::exception& e) {
    throw InputError(std::string("complex: ") + e.what());
  }
  if (simplices.empty()) throw InputError("complex: no simplices");
  std::set<Vertex> vset;
  for (const auto& s : simplices) vset.insert(s.begin(), s.end());
  Complex x = build_complex(std::vector<Vertex>(vset.begin(), vset.end()), simplices);
  if (j.contains("orientation")) {
    for (const auto& [key, val] : j.at("orientation").items()) {
      Simplex s = simplex_from_key(key);
      if (!x.contains(s))
        throw InputError("orientation entry " + key + " is not a simplex of the complex");
      int sign = val.get<int>();
      if (sign != 1 && sign != -1)
        throw InputError("orientation signs must be +1 or -1");
      x.orientation[s] = sign;
    }
  }
  return x;
}

Json bundle_to_json(const CocycleBundle& e) {
  Json j;
  j["schema"] = "1";
  j["type"] = "bundle";
  j["rank"] = e.rank;
  j["depth"] = e.depth;
  j["complex"] = complex_to_json(e.base);
  Json tr;
  for (const auto& [pair, f] : e.transitions)
    tr[simplex_key(pair.first) + "<" + simplex_key(pair.second)] = sampled_to_json(f);
  j["transitions"] = std::move(tr);
  return j;
}

CocycleBundle bundle_from_json(const Json& j) {
  require_schema(j, "bundle");
  require_type(j, "bundle");
  CocycleBundle e;
  try {
    e.rank = j.at("rank").get<int>();
    e.depth = j.at("depth").get<int>();
    e.base = complex_from_json(j.at("complex"));
    for (const auto& [key, val] : j.at("transitions").items()) {
      auto sep = key.find('<');
      if (sep == std::string::npos)
        throw InputError("transition key \"" + key + "\" lacks the '<' separator");
      Simplex rho = simplex_from_key(key.substr(0, sep));
      Simplex sigma = simplex_from_key(key.substr(sep + 1));
      if (!e.base.contains(rho) || !e.base.contains(sigma))
        throw InputError("transition key " + key + " references unknown simplices");
      e.transitions[{rho, sigma}] = sampled_from_json(val);
    }
  } catch (const Json::exception& ex) {
    throw InputError(std::string("bundle: ") + ex.what());
  }
  if (e.rank < 1 || e.depth < 1) throw InputError("bundle: bad rank or depth");
  return e;
}

Json rep_to_json(const AlmostRep& r) {
  Json j;
  j["schema"] = "1";
  j["type"] = "rep";
  j["generators"] = r.pres.generators;
  j["relations"] = r.pres.relations;
  j["basepoint"] = r.pres.basepoint;
  j["generator_loops"] = r.pres.generator_loops;
  Json edges = Json::array();
  for (const auto& e : r.pres.generator_edges) edges.push_back(e);
  j["generator_edges"] = std::move(edges);
  Json imgs = Json::array();
  for (const auto& m : r.images) imgs.push_back(matrix_to_json(m));
  j["images"] = std::move(imgs);
  return j;
}

AlmostRep rep_from_json(const Json& j) {
  require_schema(j, "rep");
  require_type(j, "rep");
  AlmostRep r;
  try {
    r.pres.generators = j.at("generators").get<std::vector<std::string>>();
    r.pres.relations = j.at("relations").get<std::vector<Word>>();
    r.pres.basepoint = j.value("basepoint", -1);
    if (j.contains("generator_loops"))
      r.pres.generator_loops = j.at("generator_loops").get<std::vector<SimplicialPath>>();
    if (j.contains("generator_edges"))
      for (const auto& e : j.at("generator_edges"))
        r.pres.generator_edges.push_back(e.get<Simplex>());
    for (const auto& m : j.at("images")) r.images.push_back(matrix_from_json(m));
  } catch (const Json::exception& ex) {
    throw InputError(std::string("rep: ") + ex.what());
  }
  if (r.images.size() != r.pres.generators.size())
    throw InputError("rep: image count does not match the generators");
  return r;
}

Json trivialization_to_json(const GlobalTrivialization& t) {
  Json j;
  j["schema"] = "1";
  j["type"] = "trivialization";
  j["rank"] = t.rank;
  j["depth"] = t.depth;
  j["chart_audit"] = t.chart_audit;
  Json charts;
  for (const auto& [s, f] : t.charts) charts[simplex_key(s)] = sampled_to_json(f);
  j["charts"] = std::move(charts);
  return j;
}

GlobalTrivialization trivialization_from_json(const Json& j) {
  require_schema(j, "trivialization");
  require_type(j, "trivialization");
  GlobalTrivialization t;
  try {
    t.rank = j.at("rank").get<int>();
    t.depth = j.at("depth").get<int>();
    t.chart_audit = j.value("chart_audit", 0.0);
    for (const auto& [key, val] : j.at("charts").items())
      t.charts[simplex_from_key(key)] = sampled_from_json(val);
  } catch (const Json::exception& ex) {
    throw InputError(std::string("trivialization: ") + ex.what());
  }
  return t;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace flatbundle
