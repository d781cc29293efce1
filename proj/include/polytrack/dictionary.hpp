#pragma once

#include "polytrack/common.hpp"
#include "polytrack/geometry.hpp"
#include "polytrack/likelihood.hpp"
#include "polytrack/scattering.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polytrack {

/// One shape class: barycentric shape vector plus everything that can be
/// precomputed before tracking (contour length, surface area, edge partition,
/// triangulation, reflectivity, per-sensor cardinality parameters and an
/// optional cached particle set).
struct DictionaryEntry {
  int id = -1;
  std::string name;
  ShapeVector shape;
  double contour_len = 0.0;
  double surface_area = 0.0;
  EdgePartition partition;
  Triangulation triangulation;
  double reflectivity = 1.0;
  std::optional<CardinalityParams> contour_cardinality;
  std::optional<CardinalityParams> surface_cardinality;
  std::optional<ParticleSet> particles;

  /// Throws kPrecondition when `prepare_sensors` has not provided the kind.
  const CardinalityParams& cardinality(SensorKind kind) const;
};

/// Immutable after load; shareable across threads. Shapes are normalized to
/// counter-clockwise order on load; structural or barycenter failures reject
/// the file, asymmetry only produces a warning.
class Dictionary {
 public:
  std::size_t size() const { return entries_.size(); }
  const DictionaryEntry& entry(std::size_t i) const { return entries_[i]; }
  const std::vector<DictionaryEntry>& entries() const { return entries_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Index of the entry with the given name; throws kLoad when absent.
  std::size_t find(const std::string& name) const;

  /// Total and average vertex counts.
  int complexity() const;
  double average_complexity() const;

  /// Computes per-sensor cardinality parameters for every entry.
  void prepare_sensors(const std::vector<SensorConfig>& sensors);

  /// Generates and caches one particle set per entry, seeded per class.
  void build_particle_sets(int count, std::uint64_t seed);

  friend Dictionary load_dictionary(const std::string& path);

 private:
  std::vector<DictionaryEntry> entries_;
  std::vector<std::string> warnings_;
};

/// Parses a JSON array of {name, vertices, reflectivity} records, validates
/// and precomputes every entry.
Dictionary load_dictionary(const std::string& path);

}  // namespace polytrack
