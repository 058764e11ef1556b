#pragma once

#include "pbtk/model.hpp"

#include <random>
#include <string>
#include <vector>

namespace bench {

// Random approval election with `voters` voters and `projects` projects;
// each voter approves about `density` of the projects.
inline pbtk::Election make_election(std::size_t voters, std::size_t projects, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> cost(50, 500);
  std::bernoulli_distribution approve(density);
  std::vector<pbtk::Project> ps;
  std::int64_t total = 0;
  for (std::size_t p = 0; p < projects; ++p) {
    pbtk::Project project;
    project.id = std::to_string(p + 1);
    project.cost = cost(rng);
    project.tags = {p % 3 == 0 ? "culture" : "sport"};
    total += project.cost;
    ps.push_back(std::move(project));
  }
  std::vector<std::string> ids;
  std::vector<pbtk::ScoreEntry> scores;
  for (std::size_t i = 0; i < voters; ++i) {
    ids.push_back("v" + std::to_string(i));
    for (std::size_t p = 0; p < projects; ++p) {
      if (approve(rng)) scores.push_back({i, p, 1});
    }
  }
  return pbtk::Election(std::move(ps), std::move(ids), total / 4, std::move(scores));
}

}  // namespace bench
