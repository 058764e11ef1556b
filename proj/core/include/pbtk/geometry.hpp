#pragma once

#include "pbtk/model.hpp"
#include "pbtk/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pbtk {

/// Symmetric distance matrix over labelled projects, stored row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Rational& at(std::size_t i, std::size_t j) const { return d_.at(i * size() + j); }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, const Rational& value);

 private:
  std::vector<std::string> labels_;
  std::vector<Rational> d_;
};

struct JaccardResult {
  DistanceMatrix matrix;
  /// Ids of projects without supporters, which are left out.
  std::vector<std::string> excluded;
};

/// |N(p) △ N(q)| / |N(p) ∪ N(q)| over supporter sets. Throws TooFewProjects
/// when fewer than two supported projects remain.
JaccardResult jaccard_matrix(const Election& e);

/// Entrywise max(0, d - 1/2).
DistanceMatrix normalize_distances(const DistanceMatrix& dm);

struct EmbeddedPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

struct Embedding {
  std::vector<EmbeddedPoint> coords;
  double stress = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  /// All target distances were zero; every point sits at the origin.
  bool degenerate = false;
  /// Raw stress after initialization and after every iteration.
  std::vector<double> stress_history;
};

struct MdsOptions {
  std::uint64_t seed = 0;
  int max_iter = 1000;
  double tol = 1e-9;
};

/// Two-dimensional SMACOF embedding minimizing raw stress
/// sum_{i<j} (d_ij - |x_i - x_j|)^2, from a seeded uniform start in
/// [-0.5, 0.5]^2.
Embedding mds_embed(const DistanceMatrix& dm, const MdsOptions& options = {});

/// Raw stress of a configuration against `dm`.
double raw_stress(const DistanceMatrix& dm, const std::vector<EmbeddedPoint>& coords);

enum class MapStatus { neither, both, es_only, ug_only };
enum class PositionSource { gps, embedding };

std::string_view to_string(MapStatus status);

struct MapDatum {
  std::string project_id;
  double x = 0.0;
  double y = 0.0;
  double cost_radius = 0.0;
  double votes_radius = 0.0;
  MapStatus status = MapStatus::neither;
};

struct MapExport {
  std::vector<MapDatum> data;
  /// Projects left off the map (no position or no supporters).
  std::vector<std::string> skipped;
};

/// One datum per plottable project. Radii are square roots of cost and
/// supporter count relative to the largest value, so disc areas are
/// proportional to them. GPS positions map longitude to x and latitude to y.
/// Throws NoPositions when nothing is plottable.
MapExport export_map(const Election& e, PositionSource source, const Outcome& equal_shares,
                     const Outcome& greedy, const Embedding* embedding = nullptr);

}  // namespace pbtk
