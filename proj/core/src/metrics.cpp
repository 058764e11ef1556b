#include "pbtk/metrics.hpp"

#include "pbtk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pbtk {

namespace {

std::vector<bool> membership(const Election& e, std::span<const ProjectIndex> selected) {
  std::vector<bool> in(e.num_projects(), false);
  for (const auto p : selected) in.at(p) = true;
  return in;
}

Rational fraction(std::size_t num, std::size_t den) {
  if (den == 0) return 0;
  Rational out(static_cast<long>(num), static_cast<long>(den));
  out.canonicalize();
  return out;
}

std::vector<std::string> tags_of(const Project& p) {
  if (p.tags.empty()) return {std::string(kUntaggedTag)};
  std::vector<std::string> tags = p.tags;
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  return tags;
}

}  // namespace

std::vector<Rational> voter_utilities(const Election& e, std::span<const ProjectIndex> selected, UtilityModel model) {
  std::vector<Rational> out(e.num_voters(), Rational(0));
  for (const auto p : selected) {
    const auto cost = e.project(p).cost;
    for (const auto& s : e.supporters(p)) {
      out[s.voter] += model == UtilityModel::score ? s.score : Rational(s.score * cost);
    }
  }
  return out;
}

Rational average_utility(const Election& e, std::span<const ProjectIndex> selected, UtilityModel model) {
  if (e.num_voters() == 0) return 0;
  Rational total = 0;
  for (const auto& u : voter_utilities(e, selected, model)) total += u;
  return total / static_cast<long>(e.num_voters());
}

PairReport dominance_pair(const Election& e, std::span<const ProjectIndex> first,
                          std::span<const ProjectIndex> second, UtilityModel model) {
  const auto u1 = voter_utilities(e, first, model);
  const auto u2 = voter_utilities(e, second, model);
  std::size_t wins1 = 0;
  std::size_t wins2 = 0;
  for (VoterIndex i = 0; i < e.num_voters(); ++i) {
    if (u1[i] > u2[i]) ++wins1;
    else if (u2[i] > u1[i]) ++wins2;
  }
  PairReport out;
  out.dominance_1_over_2 = fraction(wins1, e.num_voters());
  out.dominance_2_over_1 = fraction(wins2, e.num_voters());
  out.improvement_margin = out.dominance_1_over_2 - out.dominance_2_over_1;
  return out;
}

Rational exclusion_ratio(const Election& e, std::span<const ProjectIndex> selected) {
  std::vector<bool> covered(e.num_voters(), false);
  for (const auto p : selected) {
    for (const auto& s : e.supporters(p)) covered[s.voter] = true;
  }
  return fraction(static_cast<std::size_t>(std::count(covered.begin(), covered.end(), false)), e.num_voters());
}

std::vector<Rational> voter_shares(const Election& e, std::span<const ProjectIndex> selected) {
  std::vector<Rational> shares(e.num_voters(), Rational(0));
  for (const auto p : selected) {
    const auto& total = e.total_score(p);
    if (total == 0) {
      throw Error(ErrorCode::UnsupportedSelectedProject,
                  "selected project '" + e.project(p).id + "' has no supporters");
    }
    const Rational per_point = Rational(e.project(p).cost) / total;
    for (const auto& s : e.supporters(p)) shares[s.voter] += s.score * per_point;
  }
  return shares;
}

Rational power_inequality(const Election& e, std::span<const ProjectIndex> selected) {
  if (e.num_voters() == 0 || e.budget() == 0) return 0;
  const auto shares = voter_shares(e, selected);
  const Rational fair = Rational(e.budget()) / static_cast<long>(e.num_voters());
  Rational deviation = 0;
  for (const auto& s : shares) deviation += abs(s - fair);
  // (1/n) * sum |share - b/n| * (n/b) simplifies to sum |share - b/n| / b.
  return deviation / e.budget();
}

Rational gini(std::span<const Rational> values) {
  const auto n = values.size();
  if (n == 0) return 0;
  std::vector<Rational> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Rational total = 0;
  for (const auto& v : sorted) total += v;
  if (total == 0) return 0;
  // sum_i sum_j |x_i - x_j| = 2 * sum_k (2k - n + 1) x_(k) for ascending x.
  Rational weighted = 0;
  for (std::size_t k = 0; k < n; ++k) {
    weighted += sorted[k] * (2 * static_cast<long>(k) - static_cast<long>(n) + 1);
  }
  // sum|diff| / (2 n^2 mean) = 2 * weighted / (2 n total)
  return weighted / (total * static_cast<long>(n));
}

Rational budget_dispersion(const Election& e, std::span<const ProjectIndex> selected) {
  std::map<std::string, std::vector<VoterIndex>, std::less<>> districts;
  for (VoterIndex i = 0; i < e.num_voters(); ++i) {
    if (auto d = e.district_of(i)) districts[std::string(*d)].push_back(i);
  }
  if (districts.empty()) throw Error(ErrorCode::NoDistricts, "no voter has a known district");
  std::size_t counted = 0;
  for (const auto& [name, members] : districts) counted += members.size();

  const auto shares = voter_shares(e, selected);
  Rational sum = 0;
  for (const auto& [name, members] : districts) {
    Rational spent = 0;
    for (const auto i : members) spent += shares[i];
    const Rational expected = fraction(members.size(), counted) * e.budget();
    sum += abs(spent - expected) / expected;
  }
  return sum / static_cast<long>(districts.size());
}

Rational robustness_ratio(const Election& e, std::span<const ProjectIndex> cardinal,
                          std::span<const ProjectIndex> approval) {
  const auto base = e.cost(cardinal);
  if (base == 0) return 1;
  const auto in_approval = membership(e, approval);
  std::int64_t overlap = 0;
  for (const auto p : cardinal) {
    if (in_approval[p]) overlap += e.project(p).cost;
  }
  Rational out(overlap, base);
  out.canonicalize();
  return out;
}

Rational robustness_ratio(const Election& e, const std::function<Outcome(const Election&)>& rule) {
  const Outcome cardinal = rule(e);
  const Outcome approval = rule(to_approval(e));
  return robustness_ratio(e, cardinal.selected, approval.selected);
}

TagShares tag_shares(const Election& e, std::span<const ProjectIndex> selected) {
  TagShares out;
  std::vector<std::vector<std::string>> project_tags;
  project_tags.reserve(e.num_projects());
  for (const auto& p : e.projects()) {
    project_tags.push_back(tags_of(p));
    for (const auto& t : project_tags.back()) {
      out.vote_shares.emplace(t, 0);
      out.spending_shares.emplace(t, 0);
    }
  }

  for (VoterIndex i = 0; i < e.num_voters(); ++i) {
    const auto ballot = e.ballot(i);
    if (ballot.empty()) {
      ++out.empty_ballots;
      continue;
    }
    for (const auto& item : ballot) {
      const auto& tags = project_tags[item.project];
      Rational part(1, static_cast<long>(ballot.size() * tags.size()));
      part.canonicalize();
      for (const auto& t : tags) out.vote_shares[t] += part;
    }
  }
  if (e.num_voters() > 0) {
    for (auto& [tag, share] : out.vote_shares) share /= static_cast<long>(e.num_voters());
  }

  const auto spent = e.cost(selected);
  if (spent > 0) {
    for (const auto p : selected) {
      const auto& tags = project_tags[p];
      Rational part(e.project(p).cost, static_cast<long>(tags.size()));
      part.canonicalize();
      for (const auto& t : tags) out.spending_shares[t] += part;
    }
    for (auto& [tag, share] : out.spending_shares) share /= spent;
  }

  for (const auto& [tag, vote] : out.vote_shares) {
    const Rational diff = vote - out.spending_shares.at(tag);
    out.l2_squared += diff * diff;
  }
  out.l2 = std::sqrt(to_double(out.l2_squared));
  return out;
}

Rational funds_used(const Election& e, std::span<const ProjectIndex> selected) {
  if (e.budget() == 0) return 0;
  Rational out(e.cost(selected), e.budget());
  out.canonicalize();
  return out;
}

}  // namespace pbtk
