#include "polytrack/dictionary.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>

namespace polytrack {

const CardinalityParams& DictionaryEntry::cardinality(SensorKind kind) const {
  const auto& slot =
      kind == SensorKind::kContour ? contour_cardinality : surface_cardinality;
  if (!slot) {
    throw Error(ErrorCode::kPrecondition,
                "no " + to_string(kind) + " cardinality prepared for entry " + name);
  }
  return *slot;
}

std::size_t Dictionary::find(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  throw Error(ErrorCode::kLoad, "dictionary has no entry named " + name);
}

int Dictionary::complexity() const {
  int total = 0;
  for (const auto& e : entries_) total += e.shape.size();
  return total;
}

double Dictionary::average_complexity() const {
  return entries_.empty() ? 0.0 : static_cast<double>(complexity()) / entries_.size();
}

void Dictionary::prepare_sensors(const std::vector<SensorConfig>& sensors) {
  for (auto& e : entries_) {
    for (const SensorConfig& s : sensors) {
      const CardinalityParams p = cardinality_params(e.shape, s, e.reflectivity);
      if (s.kind == SensorKind::kContour) {
        e.contour_cardinality = p;
      } else {
        e.surface_cardinality = p;
      }
    }
  }
}

void Dictionary::build_particle_sets(int count, std::uint64_t seed) {
  for (auto& e : entries_) {
    const std::uint64_t entry_seed =
        Rng(seed).split(static_cast<std::uint64_t>(e.id)).seed();
    if (e.particles && e.particles->size() == count && e.particles->seed == entry_seed) {
      continue;  // cached for this (class, count, seed) triple
    }
    e.particles = build_particles(e.shape, e.triangulation, count, entry_seed);
    e.particles->source_id = e.id;
  }
}

Dictionary load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kLoad, "cannot open dictionary file " + path);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kLoad, "dictionary parse error: " + std::string(e.what()));
  }
  if (!doc.is_array() || doc.empty()) {
    throw Error(ErrorCode::kLoad, "dictionary must be a non-empty array");
  }

  Dictionary dict;
  std::set<std::string> names;
  for (const auto& rec : doc) {
    const std::string name = rec.value("name", std::string{});
    if (name.empty()) {
      throw Error(ErrorCode::kLoad, "dictionary entry without a name");
    }
    if (!names.insert(name).second) {
      throw Error(ErrorCode::kLoad, "duplicate dictionary entry " + name);
    }
    if (!rec.contains("vertices") || !rec["vertices"].is_array()) {
      throw Error(ErrorCode::kLoad, "entry " + name + ": missing vertices");
    }
    std::vector<Vec2> vertices;
    for (const auto& v : rec["vertices"]) {
      if (!v.is_array() || v.size() != 2) {
        throw Error(ErrorCode::kLoad, "entry " + name + ": bad vertex record");
      }
      vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    if (vertices.size() < 3) {
      throw Error(ErrorCode::kLoad, "entry " + name + ": fewer than 3 vertices");
    }
    const double reflectivity = rec.value("reflectivity", 1.0);
    if (reflectivity < 0.0 || reflectivity > 1.0) {
      throw Error(ErrorCode::kLoad, "entry " + name + ": reflectivity outside [0,1]");
    }

    ShapeVector shape =
        normalized_ccw(ShapeVector(std::move(vertices), Frame::kBarycentric));
    const ValidityReport rep = validate(shape);
    if (!rep.valid()) {
      throw Error(ErrorCode::kLoad,
                  "entry " + name + " failed validation:\n" + rep.describe());
    }
    if (rep.symmetric && !rep.symmetric->pass) {
      dict.warnings_.push_back("entry " + name + " is asymmetric (defect " +
                               std::to_string(rep.symmetric->defect) + " m)");
    }
    DictionaryEntry entry{static_cast<int>(dict.entries_.size()),
                          name,
                          std::move(shape),
                          0.0,
                          0.0,
                          {},
                          {},
                          reflectivity,
                          {},
                          {},
                          {}};
    entry.contour_len = contour_length(entry.shape);
    entry.surface_area = std::abs(barycenter_area(entry.shape).area);
    entry.partition = edge_partition(entry.shape);
    entry.triangulation = triangulate(entry.shape);
    dict.entries_.push_back(std::move(entry));
  }
  return dict;
}

}  // namespace polytrack
