#include "doctest.h"

#include "pbtk/errors.hpp"
#include "pbtk/model.hpp"
#include "support/random_instances.hpp"
#include "support/toy.hpp"

using namespace pbtk;
using testing_support::indices;
using testing_support::toy_election;
using testing_support::toy_file;

namespace {

ElectionFile district_file(const std::string& subunit, std::int64_t budget, const std::string& votes) {
  std::string text =
      "META\nkey;value\ndescription;d\ncountry;Poland\nunit;Town\ninstance;2022\nnum_projects;2\n"
      "num_votes;2\nbudget;" +
      std::to_string(budget) + "\nvote_type;approval\nrule;greedy\n";
  if (!subunit.empty()) text += "subunit;" + subunit + "\n";
  text += "PROJECTS\nproject_id;cost\n1;100\n2;200\nVOTES\nvoter_id;vote\n" + votes;
  return parse_pb(text, subunit);
}

Rational score_mass(const Election& e) {
  Rational total = 0;
  for (const auto& s : e.score_entries()) total += s.score;
  return total;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("toy election scores") {
    const auto e = toy_election();
    CHECK(e.num_projects() == 5);
    CHECK(e.num_voters() == 10);
    CHECK(e.budget() == 2500);
    CHECK(e.is_approval());
    const auto v1 = e.voter_index("1");
    for (const char* id : {"1", "2", "4"}) CHECK(e.score(v1, e.project_index(id)) == 1);
    for (const char* id : {"5", "7"}) CHECK(e.score(v1, e.project_index(id)) == 0);
    CHECK(e.ballot(v1).size() == 3);
    CHECK(e.total_score(e.project_index("4")) == 6);
    CHECK(e.project(e.project_index("5")).tags == std::vector<std::string>{"health", "sport"});
  }

  TEST_CASE("utility of voter 3") {
    const auto e = toy_election();
    const std::vector<std::string> w{"4", "5"};
    CHECK(utility(e, "3", w, UtilityModel::cost) == 2400);
    CHECK(utility(e, "3", w, UtilityModel::score) == 2);
    CHECK(utility(e, "3", std::vector<std::string>{}, UtilityModel::cost) == 0);
    CHECK_THROWS_AS(utility(e, "99", w, UtilityModel::cost), Error);
    try {
      utility(e, "3", std::vector<std::string>{"3"}, UtilityModel::cost);
      FAIL("expected UnknownProject");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::UnknownProject);
    }
  }

  TEST_CASE("cumulative points are copied") {
    const auto f = parse_pb(
        "META\nkey;value\ndescription;c\ncountry;PL\nunit;U\ninstance;1\nnum_projects;2\nnum_votes;1\n"
        "budget;10\nvote_type;cumulative\nrule;greedy\nmax_sum_points;10\n"
        "PROJECTS\nproject_id;cost\n2;5\n7;5\nVOTES\nvoter_id;vote;points\nx;7,2;6,4\n");
    const auto e = build_election(f);
    CHECK(e.score(0, e.project_index("7")) == 6);
    CHECK(e.score(0, e.project_index("2")) == 4);
    CHECK_FALSE(e.is_approval());
    const auto a = to_approval(e);
    CHECK(a.score(0, a.project_index("7")) == 1);
    CHECK(a.score(0, a.project_index("2")) == 1);
  }

  TEST_CASE("ordinal ballots use ballot-relative Borda") {
    const auto f = parse_pb(
        "META\nkey;value\ndescription;o\ncountry;PL\nunit;U\ninstance;1\nnum_projects;4\nnum_votes;2\n"
        "budget;10\nvote_type;ordinal\nrule;greedy\n"
        "PROJECTS\nproject_id;cost\na;1\nb;1\nc;1\nd;1\nVOTES\nvoter_id;vote\nx;a,b,c\ny;d\n");
    const auto e = build_election(f);
    CHECK(e.score(0, e.project_index("a")) == 3);
    CHECK(e.score(0, e.project_index("b")) == 2);
    CHECK(e.score(0, e.project_index("c")) == 1);
    CHECK(e.score(0, e.project_index("d")) == 0);
    CHECK(e.score(1, e.project_index("d")) == 1);

    auto other = f;
    other.meta.set("scoring_fn", "Dowdall");
    CHECK_THROWS_AS(build_election(other), Error);
  }

  TEST_CASE("scoring default applies to unlisted projects") {
    const auto f = parse_pb(
        "META\nkey;value\ndescription;s\ncountry;PL\nunit;U\ninstance;1\nnum_projects;2\nnum_votes;1\n"
        "budget;10\nvote_type;scoring\nrule;greedy\ndefault_score;1\n"
        "PROJECTS\nproject_id;cost\na;1\nb;1\nVOTES\nvoter_id;vote;points\nx;a;3\n");
    const auto e = build_election(f);
    CHECK(e.score(0, e.project_index("a")) == 3);
    CHECK(e.score(0, e.project_index("b")) == 1);
  }

  TEST_CASE("GPS comes from latitude and longitude columns") {
    const auto f = parse_pb(
        "META\nkey;value\ndescription;g\ncountry;PL\nunit;U\ninstance;1\nnum_projects;2\nnum_votes;1\n"
        "budget;10\nvote_type;approval\nrule;greedy\n"
        "PROJECTS\nproject_id;cost;latitude;longitude\na;1;50.06;19.94\nb;1;;\nVOTES\nvoter_id;vote\nx;a\n");
    const auto e = build_election(f);
    REQUIRE(e.project(0).gps.has_value());
    CHECK(e.project(0).gps->latitude == doctest::Approx(50.06));
    CHECK(e.project(0).gps->longitude == doctest::Approx(19.94));
    CHECK_FALSE(e.project(1).gps.has_value());
  }

  TEST_CASE("construction rejects bad input") {
    std::vector<Project> ps{{"a", 10, {}, {}}};
    CHECK_THROWS_AS(Election(ps, {"x"}, 10, {{0, 0, Rational(-1)}}), Error);
    CHECK_THROWS_AS(Election(ps, {"x"}, 10, {{0, 0, 1}, {0, 0, 2}}), Error);
    CHECK_THROWS_AS(Election(ps, {"x", "x"}, 10, {}), Error);
    CHECK_THROWS_AS(Election({{"a", 0, {}, {}}}, {"x"}, 10, {}), Error);
    const Election zero(ps, {"x"}, 10, {{0, 0, 0}});
    CHECK(zero.supporters(0).empty());
  }

  TEST_CASE("utility is additive over disjoint sets") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 100; ++round) {
      const auto g = testing_support::random_instance(rng, {.cardinal = true});
      const auto& e = g.election;
      std::vector<ProjectIndex> w1;
      std::vector<ProjectIndex> w2;
      for (ProjectIndex p = 0; p < e.num_projects(); ++p) (p % 2 ? w1 : w2).push_back(p);
      std::vector<ProjectIndex> all(w1);
      all.insert(all.end(), w2.begin(), w2.end());
      for (VoterIndex i = 0; i < e.num_voters(); ++i) {
        for (auto m : {UtilityModel::score, UtilityModel::cost}) {
          CHECK(utility(e, i, all, m) == utility(e, i, w1, m) + utility(e, i, w2, m));
        }
      }
      const auto a = to_approval(e);
      for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
        REQUIRE(a.supporters(p).size() == e.supporters(p).size());
        for (std::size_t k = 0; k < a.supporters(p).size(); ++k) {
          CHECK(a.supporters(p)[k].voter == e.supporters(p)[k].voter);
        }
      }
      CHECK(to_approval(a).score_entries().size() == a.score_entries().size());
    }
  }

  TEST_CASE("approval utilities count approved costs") {
    const auto e = toy_election();
    const auto w = indices(e, {"1", "4", "7"});
    for (VoterIndex i = 0; i < e.num_voters(); ++i) {
      std::int64_t c = 0;
      Rational k = 0;
      for (auto p : w) {
        if (e.score(i, p) > 0) {
          c += e.project(p).cost;
          k += 1;
        }
      }
      CHECK(utility(e, i, w, UtilityModel::cost) == c);
      CHECK(utility(e, i, w, UtilityModel::score) == k);
    }
  }

  TEST_CASE("single file scheme is the file itself") {
    const std::vector<ElectionFile> files{toy_file()};
    for (auto scheme : {Scheme::citywide, Scheme::districtwise}) {
      const auto s = assemble_scheme(files, scheme);
      REQUIRE(s.sub_elections.size() == 1);
      CHECK(s.sub_elections[0].label == "citywide");
      CHECK(s.merged.projects() == toy_election().projects());
      CHECK(s.merged.budget() == 2500);
      CHECK_FALSE(s.merged.has_districts());
    }
  }

  TEST_CASE("two files merge voters and budgets") {
    const std::vector<ElectionFile> files{district_file("North", 1500, "42;1\n7;2\n"),
                                          district_file("", 1000, "42;2\n9;1,2\n")};
    const auto s = assemble_scheme(files, Scheme::citywide);
    REQUIRE(s.sub_elections.size() == 2);
    CHECK(s.sub_elections[0].label == "citywide");
    CHECK(s.sub_elections[1].label == "North");
    CHECK(s.merged.budget() == 2500);
    CHECK(s.merged.num_projects() == 4);
    CHECK(s.merged.num_voters() == 3);
    const auto v42 = s.merged.voter_index("42");
    CHECK(s.merged.ballot(v42).size() == 2);
    CHECK(s.merged.score(v42, s.merged.project_index("North/1")) == 1);
    CHECK(s.merged.score(v42, s.merged.project_index("citywide/2")) == 1);
    CHECK(s.merged.district_of(v42) == std::optional<std::string_view>("North"));
    CHECK_FALSE(s.merged.district_of(s.merged.voter_index("9")).has_value());

    Rational parts = 0;
    for (const auto& sub : s.sub_elections) parts += score_mass(sub.election);
    CHECK(score_mass(s.merged) == parts);
  }

  TEST_CASE("scheme assembly errors") {
    auto other = district_file("South", 100, "1;1\n2;2\n");
    other.meta.set("unit", "Elsewhere");
    const std::vector<ElectionFile> mixed{district_file("North", 100, "1;1\n2;2\n"), other};
    CHECK_THROWS_AS(assemble_scheme(mixed, Scheme::citywide), Error);
    const std::vector<ElectionFile> dup{district_file("North", 100, "1;1\n2;2\n"),
                                        district_file("North", 100, "3;1\n4;2\n")};
    try {
      assemble_scheme(dup, Scheme::districtwise);
      FAIL("expected DuplicateSubunit");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::DuplicateSubunit);
    }
  }

  TEST_CASE("combined outcome is the union of parts") {
    const std::vector<ElectionFile> files{district_file("A", 100, "1;1\n2;1\n"), district_file("B", 200, "3;2\n4;2\n")};
    const auto s = assemble_scheme(files, Scheme::districtwise);
    std::vector<Outcome> parts{make_outcome(s.sub_elections[0].election, {0}),
                               make_outcome(s.sub_elections[1].election, {1})};
    const auto out = combine_outcomes(s, parts);
    CHECK(out.ids(s.merged) == std::vector<std::string>{"A/1", "B/2"});
    CHECK(out.total_cost == 300);
    CHECK(out.funds_used_fraction == 1);
  }
}
