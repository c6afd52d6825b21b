#include "qgeo/report.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qgeo {

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  std::string s = buf;
  // Keep the value recognizably floating point.
  if (s.find_first_of(".eE") == std::string::npos &&
      s.find_first_not_of("-0123456789") == std::string::npos)
    s += ".0";
  return s;
}

void dump_rec(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += Json(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(v, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();  // strings (escaped), integers, booleans, null
      return;
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_rec(const Json& j, const std::string& path, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      for (auto it = j.begin(); it != j.end(); ++it)
        csv_rec(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
      return;
    }
    case Json::value_t::array: {
      std::size_t i = 0;
      for (const auto& v : j) {
        csv_rec(v, path + "." + std::to_string(i), out);
        ++i;
      }
      return;
    }
    case Json::value_t::number_float:
      out += csv_escape(path) + "," + format_double(j.get<double>()) + "\n";
      return;
    case Json::value_t::string:
      out += csv_escape(path) + "," + csv_escape(j.get<std::string>()) + "\n";
      return;
    default:
      out += csv_escape(path) + "," + j.dump() + "\n";
      return;
  }
}

[[noreturn]] void bad_field(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

double need_number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad_field(where, "expected a number");
  return j.get<double>();
}

int need_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad_field(where, "expected an integer");
  return j.get<int>();
}

const Json& need_key(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad_field(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad_field(where, std::string("missing field \"") + key + "\"");
  return *it;
}

Vec need_vector(const Json& j, int dim, const std::string& where) {
  if (!j.is_array()) bad_field(where, "expected an array");
  if (static_cast<int>(j.size()) != dim)
    bad_field(where, "expected length " + std::to_string(dim) + ", got " +
                         std::to_string(j.size()));
  Vec v(dim);
  int i = 0;
  for (const auto& e : j) {
    v(i) = need_number(e, where + "[" + std::to_string(i) + "]");
    ++i;
  }
  return v;
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

std::string to_csv(const Json& j) {
  std::string out = "field,value\n";
  csv_rec(j, "", out);
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

DiscreteSurface surface_from_json(const Json& j, const std::string& where) {
  int dim = need_int(need_key(j, "dim", where), where + ".dim");
  if (dim < 1) bad_field(where + ".dim", "must be >= 1");
  const Json& atoms = need_key(j, "atoms", where);
  if (!atoms.is_array() || atoms.empty()) bad_field(where + ".atoms", "expected a nonempty array");
  std::vector<Atom> out;
  out.reserve(atoms.size());
  std::size_t i = 0;
  for (const auto& a : atoms) {
    std::string aw = where + ".atoms[" + std::to_string(i) + "]";
    Atom atom;
    atom.weight = need_number(need_key(a, "w", aw), aw + ".w");
    atom.v = need_vector(need_key(a, "v", aw), dim, aw + ".v");
    out.push_back(std::move(atom));
    ++i;
  }
  try {
    return validate_surface(dim, std::move(out));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
}

DiscreteSurface load_surface(const std::string& path) {
  return surface_from_json(load_json_file(path), path);
}

Json surface_to_json(const DiscreteSurface& s) {
  Json j;
  j["dim"] = s.dim;
  Json atoms = Json::array();
  for (const auto& a : s.atoms) {
    Json e;
    e["w"] = a.weight;
    Json v = Json::array();
    for (int c = 0; c < s.dim; ++c) v.push_back(a.v(c));
    e["v"] = std::move(v);
    atoms.push_back(std::move(e));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

UniformCover cover_from_json(const Json& j, const std::string& where) {
  UniformCover c;
  c.j = need_int(need_key(j, "j", where), where + ".j");
  const Json& sets = need_key(j, "sets", where);
  const Json& alphas = need_key(j, "alphas", where);
  if (!sets.is_array()) bad_field(where + ".sets", "expected an array");
  if (!alphas.is_array()) bad_field(where + ".alphas", "expected an array");
  if (sets.size() != alphas.size())
    bad_field(where, "sets and alphas must have the same length");
  std::size_t i = 0;
  for (const auto& s : sets) {
    std::string sw = where + ".sets[" + std::to_string(i) + "]";
    if (!s.is_array()) bad_field(sw, "expected an array");
    std::vector<int> idx;
    idx.reserve(s.size());
    std::size_t k = 0;
    for (const auto& e : s) {
      idx.push_back(need_int(e, sw + "[" + std::to_string(k) + "]"));
      ++k;
    }
    c.sets.push_back(std::move(idx));
    ++i;
  }
  i = 0;
  for (const auto& a : alphas) {
    c.alphas.push_back(need_number(a, where + ".alphas[" + std::to_string(i) + "]"));
    ++i;
  }
  try {
    validate_cover(c);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
  return c;
}

UniformCover load_cover(const std::string& path) {
  return cover_from_json(load_json_file(path), path);
}

Json cover_to_json(const UniformCover& c) {
  Json j;
  j["j"] = c.j;
  j["sets"] = c.sets;
  j["alphas"] = c.alphas;
  return j;
}

std::vector<AnalyticSurface> shapes_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad_field(where, "expected a nonempty array of shapes");
  std::vector<AnalyticSurface> out;
  std::size_t i = 0;
  for (const auto& s : j) {
    std::string sw = where + "[" + std::to_string(i) + "]";
    const Json& kj = need_key(s, "kind", sw);
    if (!kj.is_string()) bad_field(sw + ".kind", "expected a string");
    std::string kind = kj.get<std::string>();
    AnalyticSurface a;
    if (kind == "circle")
      a.kind = AnalyticSurface::Kind::circle;
    else if (kind == "sphere")
      a.kind = AnalyticSurface::Kind::sphere;
    else
      bad_field(sw + ".kind", "expected \"circle\" or \"sphere\"");
    a.radius = need_number(need_key(s, "r", sw), sw + ".r");
    if (!(a.radius > 0.0)) bad_field(sw + ".r", "must be positive");
    a.center = need_vector(need_key(s, "center", sw), a.dim(), sw + ".center");
    out.push_back(std::move(a));
    ++i;
  }
  return out;
}

std::vector<AnalyticSurface> load_shapes(const std::string& path) {
  return shapes_from_json(load_json_file(path), path);
}

Json shapes_to_json(const std::vector<AnalyticSurface>& shapes) {
  Json arr = Json::array();
  for (const auto& s : shapes) {
    Json e;
    e["kind"] = s.kind == AnalyticSurface::Kind::circle ? "circle" : "sphere";
    e["r"] = s.radius;
    Json c = Json::array();
    for (int i = 0; i < s.center.size(); ++i) c.push_back(s.center(i));
    e["center"] = std::move(c);
    arr.push_back(std::move(e));
  }
  return arr;
}

Json certificate_to_json(const CertificateReport& c) {
  Json j;
  j["claim"] = c.claim;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["margin"] = c.margin;
  j["pass"] = c.pass;
  Json m;
  m["lhs"] = c.lhs_method;
  m["rhs"] = c.rhs_method;
  j["method"] = std::move(m);
  j["tolerance"] = c.tolerance;
  if (c.seed)
    j["seed"] = *c.seed;
  else
    j["seed"] = nullptr;
  return j;
}

Json qestimate_to_json(const QEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["method"] = e.method;
  j["ci"] = e.ci_halfwidth;
  j["samples"] = e.samples;
  if (e.seed)
    j["seed"] = *e.seed;
  else
    j["seed"] = nullptr;
  return j;
}

}  // namespace qgeo
