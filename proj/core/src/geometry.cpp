#include "pbtk/geometry.hpp"

#include "pbtk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace pbtk {

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), d_(labels_.size() * labels_.size(), Rational(0)) {}

void DistanceMatrix::set(std::size_t i, std::size_t j, const Rational& value) {
  d_.at(i * size() + j) = value;
  d_.at(j * size() + i) = value;
}

JaccardResult jaccard_matrix(const Election& e) {
  JaccardResult out;
  std::vector<ProjectIndex> kept;
  for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
    if (e.supporters(p).empty()) out.excluded.push_back(e.project(p).id);
    else kept.push_back(p);
  }
  if (kept.size() < 2) {
    throw Error(ErrorCode::TooFewProjects, "need at least two supported projects, got " + std::to_string(kept.size()));
  }
  std::vector<std::string> labels;
  for (const auto p : kept) labels.push_back(e.project(p).id);
  out.matrix = DistanceMatrix(std::move(labels));

  for (std::size_t a = 0; a < kept.size(); ++a) {
    const auto sa = e.supporters(kept[a]);
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      const auto sb = e.supporters(kept[b]);
      // Both lists are sorted by voter index.
      std::size_t common = 0;
      auto ia = sa.begin();
      auto ib = sb.begin();
      while (ia != sa.end() && ib != sb.end()) {
        if (ia->voter < ib->voter) ++ia;
        else if (ib->voter < ia->voter) ++ib;
        else {
          ++common;
          ++ia;
          ++ib;
        }
      }
      const auto united = sa.size() + sb.size() - common;
      Rational d(static_cast<long>(united - common), static_cast<long>(united));
      d.canonicalize();
      out.matrix.set(a, b, d);
    }
  }
  return out;
}

DistanceMatrix normalize_distances(const DistanceMatrix& dm) {
  DistanceMatrix out(dm.labels());
  const Rational half(1, 2);
  for (std::size_t i = 0; i < dm.size(); ++i) {
    for (std::size_t j = i + 1; j < dm.size(); ++j) {
      const Rational shifted = dm.at(i, j) - half;
      out.set(i, j, shifted > 0 ? shifted : Rational(0));
    }
  }
  return out;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits, independent of the standard
// library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double stress_of(const std::vector<double>& target, const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = x.size();
  double stress = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = std::hypot(x[i] - x[j], y[i] - y[j]);
      const double diff = target[i * n + j] - dist;
      stress += diff * diff;
    }
  }
  return stress;
}

}  // namespace

double raw_stress(const DistanceMatrix& dm, const std::vector<EmbeddedPoint>& coords) {
  const auto n = dm.size();
  std::vector<double> target(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) target[i * n + j] = to_double(dm.at(i, j));
  }
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = coords.at(i).x;
    y[i] = coords.at(i).y;
  }
  return stress_of(target, x, y);
}

Embedding mds_embed(const DistanceMatrix& dm, const MdsOptions& options) {
  const auto n = dm.size();
  Embedding out;
  out.seed = options.seed;

  std::vector<double> target(n * n);
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      target[i * n + j] = to_double(dm.at(i, j));
      if (target[i * n + j] != 0.0) all_zero = false;
    }
  }
  if (all_zero) {
    out.degenerate = true;
    for (const auto& label : dm.labels()) out.coords.push_back({label, 0.0, 0.0});
    out.stress_history.push_back(0.0);
    return out;
  }

  std::mt19937_64 rng(options.seed);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = unit_uniform(rng) - 0.5;
    y[i] = unit_uniform(rng) - 0.5;
  }

  double stress = stress_of(target, x, y);
  out.stress_history.push_back(stress);
  std::vector<double> nx(n);
  std::vector<double> ny(n);
  for (int iter = 0; iter < options.max_iter && stress > 0.0; ++iter) {
    // Guttman transform with unit weights: X' = B(X) X / n.
    for (std::size_t i = 0; i < n; ++i) {
      double sx = 0.0;
      double sy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dist = std::hypot(x[i] - x[j], y[i] - y[j]);
        if (dist <= 0.0) continue;
        const double ratio = target[i * n + j] / dist;
        sx += ratio * (x[i] - x[j]);
        sy += ratio * (y[i] - y[j]);
      }
      nx[i] = sx / static_cast<double>(n);
      ny[i] = sy / static_cast<double>(n);
    }
    x.swap(nx);
    y.swap(ny);
    const double next = stress_of(target, x, y);
    out.stress_history.push_back(next);
    out.iterations = iter + 1;
    const double improvement = (stress - next) / stress;
    stress = next;
    if (improvement < options.tol) break;
  }

  out.stress = stress;
  for (std::size_t i = 0; i < n; ++i) out.coords.push_back({dm.labels()[i], x[i], y[i]});
  return out;
}

std::string_view to_string(MapStatus status) {
  switch (status) {
    case MapStatus::neither: return "neither";
    case MapStatus::both: return "both";
    case MapStatus::es_only: return "es_only";
    case MapStatus::ug_only: return "ug_only";
  }
  return "neither";
}

MapExport export_map(const Election& e, PositionSource source, const Outcome& equal_shares, const Outcome& greedy,
                     const Embedding* embedding) {
  if (source == PositionSource::embedding && embedding == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "embedding positions requested without an embedding");
  }
  std::unordered_map<std::string, std::pair<double, double>> embedded;
  if (embedding != nullptr) {
    for (const auto& pt : embedding->coords) embedded.emplace(pt.label, std::make_pair(pt.x, pt.y));
  }

  MapExport out;
  std::vector<ProjectIndex> plotted;
  std::vector<std::pair<double, double>> positions;
  for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
    const auto& project = e.project(p);
    std::optional<std::pair<double, double>> position;
    if (source == PositionSource::gps) {
      if (project.gps) position = std::make_pair(project.gps->longitude, project.gps->latitude);
    } else if (const auto it = embedded.find(project.id); it != embedded.end()) {
      position = it->second;
    }
    if (!position || e.supporters(p).empty()) {
      out.skipped.push_back(project.id);
      continue;
    }
    plotted.push_back(p);
    positions.push_back(*position);
  }
  if (plotted.empty()) throw Error(ErrorCode::NoPositions, "no project has a position to plot");

  double max_cost = 0.0;
  double max_votes = 0.0;
  for (const auto p : plotted) {
    max_cost = std::max(max_cost, static_cast<double>(e.project(p).cost));
    max_votes = std::max(max_votes, static_cast<double>(e.supporters(p).size()));
  }
  for (std::size_t k = 0; k < plotted.size(); ++k) {
    const auto p = plotted[k];
    MapDatum d;
    d.project_id = e.project(p).id;
    d.x = positions[k].first;
    d.y = positions[k].second;
    d.cost_radius = std::sqrt(static_cast<double>(e.project(p).cost) / max_cost);
    d.votes_radius = std::sqrt(static_cast<double>(e.supporters(p).size()) / max_votes);
    const bool es = equal_shares.contains(p);
    const bool ug = greedy.contains(p);
    d.status = es && ug ? MapStatus::both : es ? MapStatus::es_only : ug ? MapStatus::ug_only : MapStatus::neither;
    out.data.push_back(std::move(d));
  }
  return out;
}

}  // namespace pbtk
