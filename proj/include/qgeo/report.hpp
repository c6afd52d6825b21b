#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qgeo/certify.hpp"
#include "qgeo/crofton.hpp"
#include "qgeo/surface.hpp"

namespace qgeo {

using Json = nlohmann::ordered_json;

// Serializer used for every file the tool writes: stable key order, two
// space indent, floats printed with 17 significant digits so that reruns
// are byte-identical and values round-trip exactly.
std::string dump_json(const Json& j);

// Flat projection of the same report: one "path,value" row per scalar,
// array indices and object keys joined with '.'.
std::string to_csv(const Json& j);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// {"dim": d, "atoms": [{"w": w, "v": [..]} ...]}
DiscreteSurface surface_from_json(const Json& j, const std::string& where = "surface");
DiscreteSurface load_surface(const std::string& path);
Json surface_to_json(const DiscreteSurface& s);

// {"j": j, "sets": [[..] ...], "alphas": [..]} with 1-based indices.
UniformCover cover_from_json(const Json& j, const std::string& where = "cover");
UniformCover load_cover(const std::string& path);
Json cover_to_json(const UniformCover& c);

// Array of {"kind": "circle"|"sphere", "r": r, "center": [..]}.
std::vector<AnalyticSurface> shapes_from_json(const Json& j, const std::string& where = "shapes");
std::vector<AnalyticSurface> load_shapes(const std::string& path);
Json shapes_to_json(const std::vector<AnalyticSurface>& shapes);

Json certificate_to_json(const CertificateReport& c);
Json qestimate_to_json(const QEstimate& e);

}  // namespace qgeo
