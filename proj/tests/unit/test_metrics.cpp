#include "doctest.h"

#include "pbtk/errors.hpp"
#include "pbtk/metrics.hpp"
#include "pbtk/rules.hpp"
#include "support/random_instances.hpp"
#include "support/toy.hpp"

using namespace pbtk;
using testing_support::indices;
using testing_support::toy_election;

namespace {

// Pairwise-difference definition, quadratic on purpose.
Rational gini_reference(const std::vector<Rational>& u) {
  Rational total = 0;
  for (const auto& x : u) total += x;
  if (total == 0) return 0;
  Rational diff = 0;
  for (const auto& x : u) {
    for (const auto& y : u) diff += abs(x - y);
  }
  const long n = static_cast<long>(u.size());
  return diff / (2 * n * total);
}

std::vector<Rational> rationals(std::initializer_list<int> xs) {
  std::vector<Rational> out;
  for (int x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("average utility of the greedy toy outcome") {
    const auto e = toy_election();
    const auto w = indices(e, {"4", "5"});
    CHECK(average_utility(e, w, UtilityModel::cost) == 1340);
    CHECK(average_utility(e, {}, UtilityModel::cost) == 0);
    const Election all({{"a", 70, {}, {}}}, {"x", "y"}, 100, {{0, 0, 1}, {1, 0, 1}});
    CHECK(average_utility(all, std::vector<ProjectIndex>{0}, UtilityModel::cost) == 70);
  }

  TEST_CASE("dominance of add1 over greedy") {
    const auto e = toy_election();
    const auto add1 = indices(e, {"1", "4"});
    const auto ug = indices(e, {"4", "5"});
    const auto r = dominance_pair(e, add1, ug, UtilityModel::cost);
    CHECK(r.dominance_1_over_2 == pbtk::make_rational(2, 5));
    CHECK(r.dominance_2_over_1 == pbtk::make_rational(1, 2));
    CHECK(r.improvement_margin == pbtk::make_rational(-1, 10));
    CHECK(dominance_pair(e, ug, ug, UtilityModel::cost) == PairReport{});
    CHECK(dominance_pair(e, indices(e, {"1", "4", "5"}), ug, UtilityModel::cost).dominance_2_over_1 == 0);
  }

  TEST_CASE("exclusion ratio") {
    const auto e = toy_election();
    CHECK(exclusion_ratio(e, indices(e, {"4", "5"})) == pbtk::make_rational(1, 5));
    CHECK(exclusion_ratio(e, {}) == 1);
    CHECK(exclusion_ratio(e, indices(e, {"1", "4", "5", "7"})) == 0);
  }

  TEST_CASE("voter shares and power inequality") {
    const auto e = toy_election();
    const auto w = indices(e, {"4", "5"});
    const auto shares = voter_shares(e, w);
    CHECK(shares[e.voter_index("3")] == pbtk::make_rational(1400, 6) + pbtk::make_rational(1000, 5));
    CHECK(shares[e.voter_index("2")] == 0);
    Rational sum = 0;
    for (const auto& s : shares) sum += s;
    CHECK(sum == 2400);
    CHECK(power_inequality(e, w) == pbtk::make_rational(48, 100));
    CHECK(power_inequality(e, {}) == 1);

    const Election solo({{"a", 30, {}, {}}, {"b", 40, {}, {}}}, {"x"}, 100, {{0, 0, 1}});
    CHECK(voter_shares(solo, std::vector<ProjectIndex>{0})[0] == 30);
    try {
      voter_shares(solo, std::vector<ProjectIndex>{1});
      FAIL("expected UnsupportedSelectedProject");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::UnsupportedSelectedProject);
    }

    const Election unanimous({{"a", 60, {}, {}}, {"b", 40, {}, {}}}, {"x", "y"}, 100,
                             {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
    CHECK(power_inequality(unanimous, std::vector<ProjectIndex>{0, 1}) == 0);
  }

  TEST_CASE("gini values") {
    CHECK(gini(rationals({5, 5, 5, 5})) == 0);
    CHECK(gini(rationals({0, 0, 0, 1})) == pbtk::make_rational(3, 4));
    CHECK(gini(rationals({0, 0, 0})) == 0);
    CHECK(gini(rationals({1, 2, 3, 10})) == gini_reference(rationals({1, 2, 3, 10})));
  }

  TEST_CASE("budget dispersion") {
    const Election one({{"a", 60, {}, {}}}, {"x", "y"}, 100, {{0, 0, 1}}, {"D", "D"});
    CHECK(budget_dispersion(one, std::vector<ProjectIndex>{0}) == pbtk::make_rational(40, 100));

    const Election two({{"a", 50, {}, {}}, {"b", 50, {}, {}}}, {"x", "y"}, 100, {{0, 0, 1}, {1, 1, 1}},
                       {"North", "South"});
    CHECK(budget_dispersion(two, std::vector<ProjectIndex>{0, 1}) == 0);
    CHECK(budget_dispersion(two, std::vector<ProjectIndex>{0}) == pbtk::make_rational(1, 2));

    const Election partial({{"a", 50, {}, {}}}, {"x", "y", "z"}, 100, {{0, 0, 1}, {2, 0, 1}}, {"N", "S", ""});
    // Only x (N) and y (S) count; x pays 25 against 50 expected, y pays 0.
    CHECK(budget_dispersion(partial, std::vector<ProjectIndex>{0}) == pbtk::make_rational(3, 4));

    try {
      budget_dispersion(toy_election(), {});
      FAIL("expected NoDistricts");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::NoDistricts);
    }
  }

  TEST_CASE("robustness ratio") {
    const auto e = toy_election();
    const auto ug = [](const Election& x) { return utilitarian_greedy(x, UtilityModel::cost); };
    CHECK(robustness_ratio(e, ug) == 1);
    CHECK(robustness_ratio(e, {}, indices(e, {"4"})) == 1);
    CHECK(robustness_ratio(e, indices(e, {"4", "5"}), indices(e, {"4"})) == pbtk::make_rational(1400, 2400));

    // One voter gives 20 points to a, nine voters give 1 point to b. The
    // cardinal winner is a; after conversion b has more approvals.
    std::vector<std::string> voters;
    std::vector<ScoreEntry> scores{{0, 0, 20}};
    voters.push_back("v0");
    for (std::size_t i = 1; i < 10; ++i) {
      voters.push_back("v" + std::to_string(i));
      scores.push_back({i, 1, 1});
    }
    const Election flip({{"a", 10, {}, {}}, {"b", 10, {}, {}}}, voters, 10, scores);
    CHECK(ug(flip).selected == std::vector<ProjectIndex>{0});
    CHECK(robustness_ratio(flip, ug) == 0);
  }

  TEST_CASE("tag shares on the toy election") {
    const auto e = toy_election();
    const auto t = tag_shares(e, indices(e, {"4", "5"}));
    CHECK(t.vote_shares.at("culture") == pbtk::make_rational(11, 30));
    CHECK(t.spending_shares.at("culture") == pbtk::make_rational(7, 12));
    CHECK(t.spending_shares.at("health") == pbtk::make_rational(500, 2400));
    CHECK(t.empty_ballots == 0);
    Rational sum = 0;
    for (const auto& [tag, share] : t.vote_shares) sum += share;
    CHECK(sum == 1);
    CHECK(t.l2 == doctest::Approx(std::sqrt(to_double(t.l2_squared))));
  }

  TEST_CASE("single tag and untagged projects") {
    const Election one({{"a", 10, {"x"}, {}}, {"b", 20, {"x"}, {}}}, {"v", "w"}, 30, {{0, 0, 1}, {1, 1, 1}});
    const auto t = tag_shares(one, std::vector<ProjectIndex>{0});
    CHECK(t.vote_shares.at("x") == 1);
    CHECK(t.spending_shares.at("x") == 1);
    CHECK(t.l2_squared == 0);

    const Election bare({{"a", 10, {}, {}}}, {"v", "w"}, 30, {{0, 0, 1}});
    const auto u = tag_shares(bare, std::vector<ProjectIndex>{0});
    CHECK(u.vote_shares.count(std::string(kUntaggedTag)) == 1);
    CHECK(u.empty_ballots == 1);
  }

  TEST_CASE("funds used") {
    const auto e = toy_election();
    CHECK(funds_used(e, indices(e, {"4"})) == pbtk::make_rational(56, 100));
    CHECK(funds_used(e, {}) == 0);
    const Election full({{"a", 10, {}, {}}}, {"v"}, 10, {{0, 0, 1}});
    CHECK(funds_used(full, std::vector<ProjectIndex>{0}) == 1);
  }

  TEST_CASE("metric invariants on random instances") {
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 150; ++round) {
      CAPTURE(round);
      const auto g = testing_support::random_instance(rng, {.cardinal = round % 2 == 0});
      const auto& e = g.election;
      for (const char* name : {"ug-cost", "mes-score-add1u", "mes-cost"}) {
        const auto w = run_rule(e, RuleSpec::parse(name)).selected;
        const bool supported = std::all_of(w.begin(), w.end(), [&](auto p) { return e.total_score(p) > 0; });
        if (supported) {
          Rational sum = 0;
          for (const auto& s : voter_shares(e, w)) sum += s;
          CHECK(sum == e.cost(w));
        }

        const auto u = voter_utilities(e, w, UtilityModel::cost);
        const auto gv = gini(u);
        CHECK(gv == gini_reference(u));
        CHECK(gv >= 0);
        CHECK(gv <= Rational(1) - pbtk::make_rational(1, static_cast<std::int64_t>(u.size())));
        std::vector<Rational> scaled;
        for (const auto& x : u) scaled.push_back(x * pbtk::make_rational(7, 3));
        CHECK(gini(scaled) == gv);

        const auto ug = run_rule(e, RuleSpec::parse("ug-score")).selected;
        const auto ab = dominance_pair(e, w, ug, UtilityModel::score);
        const auto ba = dominance_pair(e, ug, w, UtilityModel::score);
        CHECK(ab.dominance_1_over_2 == ba.dominance_2_over_1);
        CHECK(ab.dominance_2_over_1 == ba.dominance_1_over_2);
        CHECK(ab.improvement_margin == -ba.improvement_margin);

        auto superset = w;
        for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
          if (std::find(w.begin(), w.end(), p) == w.end()) {
            superset.push_back(p);
            break;
          }
        }
        CHECK(exclusion_ratio(e, superset) <= exclusion_ratio(e, w));
      }
      const auto t = tag_shares(e, run_rule(e, RuleSpec::parse("ug-cost")).selected);
      if (t.empty_ballots == 0) {
        Rational vs = 0;
        for (const auto& [tag, share] : t.vote_shares) vs += share;
        CHECK(vs == 1);
      }
      const auto approval = to_approval(e);
      const auto mes = [](const Election& x) { return run_rule(x, RuleSpec::parse("mes-cost-add1u")); };
      CHECK(robustness_ratio(approval, mes) == 1);
    }
  }
}
