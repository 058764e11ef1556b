#include "doctest.h"

#include "pbtk/errors.hpp"
#include "pbtk/pbformat.hpp"
#include "support/toy.hpp"

#include <regex>

using namespace pbtk;
using testing_support::toy_file;
using testing_support::toy_text;

namespace {

ErrorCode parse_error_code(const std::string& text) {
  try {
    parse_pb(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parse unexpectedly succeeded");
  return ErrorCode::InvalidArgument;
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_pb(text);
  } catch (const Error& e) {
    return e.line();
  }
  return 0;
}

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

const char* kCumulative =
    "META\n"
    "key;value\n"
    "description;cumulative test\n"
    "country;Poland\n"
    "unit;Testville\n"
    "instance;2021\n"
    "num_projects;3\n"
    "num_votes;2\n"
    "budget;100\n"
    "vote_type;cumulative\n"
    "rule;greedy\n"
    "max_sum_points;10\n"
    "PROJECTS\n"
    "project_id;cost\n"
    "2;40\n"
    "7;60\n"
    "9;30\n"
    "VOTES\n"
    "voter_id;vote;points\n"
    "a;7,2;6,4\n"
    "b;9;10\n";

}  // namespace

TEST_SUITE("pbformat") {
  TEST_CASE("toy file parses into five projects and ten votes") {
    const auto f = toy_file();
    CHECK(f.projects.size() == 5);
    CHECK(f.votes.size() == 10);
    CHECK(f.budget() == 2500);
    CHECK(f.vote_type() == "approval");
    CHECK(*f.meta.find("max_length") == "3");
    CHECK(f.project_columns == std::vector<std::string>{"project_id", "cost", "category"});
    CHECK(f.projects[0].category == std::vector<std::string>{"culture", "education"});
    CHECK(f.projects[3].category == std::vector<std::string>{"health", "sport"});
  }

  TEST_CASE("voter 3 row keeps age, sex and ballot") {
    const auto f = toy_file();
    const auto& row = f.votes[2];
    CHECK(row.voter_id == "3");
    CHECK(row.age == "23");
    CHECK(row.sex == "m");
    CHECK(row.vote == std::vector<std::string>{"2", "4", "5"});
    CHECK_FALSE(row.points.has_value());
  }

  TEST_CASE("empty VOTES section with num_votes 0") {
    auto text = replace_line(toy_text(), "num_votes; 10", "num_votes; 0");
    text = text.substr(0, text.find("1; 34; f")) ;
    const auto f = parse_pb(text);
    CHECK(f.votes.empty());
    CHECK(validate(f).is_valid());
  }

  TEST_CASE("CRLF line endings and blank lines are tolerated") {
    std::string text;
    for (char c : toy_text()) {
      if (c == '\n') text += "\r\n";
      else text += c;
    }
    text = replace_line(text, "PROJECTS", "\r\n\r\nPROJECTS");
    CHECK(parse_pb(text) == toy_file());
  }

  TEST_CASE("unknown columns go to extra") {
    auto text = replace_line(toy_text(), "project_id; cost; category ", "project_id; cost; category; votes");
    text = replace_line(text, "1; 600; culture, education ", "1; 600; culture, education; 4");
    text = replace_line(text, "2; 800; sport", "2; 800; sport; 4");
    text = replace_line(text, "4; 1400; culture", "4; 1400; culture; 6");
    text = replace_line(text, "5; 1000; health, sport", "5; 1000; health, sport; 5");
    text = replace_line(text, "7; 1200; education", "7; 1200; education; 3");
    const auto f = parse_pb(text);
    CHECK(f.projects[2].extra.at("votes") == "6");
    CHECK(parse_pb(serialize(f)) == f);
  }

  TEST_CASE("parse errors carry codes and line numbers") {
    CHECK(parse_error_code("PROJECTS\nproject_id;cost\n") == ErrorCode::MissingSection);
    CHECK(parse_error_code(toy_text().substr(0, toy_text().find("VOTES"))) == ErrorCode::MissingSection);

    const auto dup = replace_line(toy_text(), "2; 800; sport", "1; 800; sport");
    CHECK(parse_error_code(dup) == ErrorCode::DuplicateId);
    CHECK(parse_error_line(dup) == 17);

    const auto dup_voter = replace_line(toy_text(), "2; 51; m; 1,2", "1; 51; m; 1,2");
    CHECK(parse_error_code(dup_voter) == ErrorCode::DuplicateId);

    CHECK(parse_error_code(replace_line(toy_text(), "vote_type; approval", "vote_type; ranked")) ==
          ErrorCode::UnknownVoteType);
    const auto malformed = replace_line(toy_text(), "7; 49; m; 5", "7; 49; 5");
    CHECK(parse_error_code(malformed) == ErrorCode::MalformedRow);
    CHECK(parse_error_line(malformed) == 29);
  }

  TEST_CASE("fractional costs are rejected, integral decimals accepted") {
    CHECK(parse_error_code(replace_line(toy_text(), "2; 800; sport", "2; 800.5; sport")) ==
          ErrorCode::InvalidNumber);
    const auto f = parse_pb(replace_line(toy_text(), "2; 800; sport", "2; 800.00; sport"));
    CHECK(f.projects[1].cost == 800);
    CHECK(parse_error_code(replace_line(toy_text(), "budget; 2500", "budget; 2500.5")) == ErrorCode::InvalidNumber);
  }

  TEST_CASE("every obligatory META key is enforced") {
    for (const auto key : kObligatoryMetaKeys) {
      CAPTURE(key);
      const std::string text = toy_text();
      const auto start = text.find("\n" + std::string(key) + ";");
      REQUIRE(start != std::string::npos);
      const auto end = text.find('\n', start + 1);
      const auto pruned = text.substr(0, start) + text.substr(end);
      CHECK(parse_error_code(pruned) == ErrorCode::MissingObligatoryField);

      auto file = toy_file();
      file.meta.erase(key);
      const auto report = validate(file);
      CHECK_FALSE(report.is_valid());
      CHECK(report.has("MissingObligatoryField"));
    }
  }

  TEST_CASE("obligatory columns are enforced") {
    CHECK(parse_error_code(replace_line(toy_text(), "voter_id; age; sex; vote", "voter_id; age; sex; ballot")) ==
          ErrorCode::MissingObligatoryField);
    CHECK(parse_error_code(replace_line(toy_text(), "project_id; cost; category ", "project_id; price; category")) ==
          ErrorCode::MissingObligatoryField);
  }

  TEST_CASE("toy file validates") {
    const auto report = validate(toy_file());
    CHECK(report.is_valid());
    CHECK(report.diagnostics.empty());
  }

  TEST_CASE("ballot above max_length is reported at that voter") {
    const auto f = parse_pb(replace_line(toy_text(), "1; 34; f; 1,2,4", "1; 34; f; 1,2,4,5"));
    const auto report = validate(f);
    CHECK_FALSE(report.is_valid());
    REQUIRE(report.has("BallotTooLong"));
    const auto it = std::find_if(report.diagnostics.begin(), report.diagnostics.end(),
                                 [](const Diagnostic& d) { return d.code == "BallotTooLong"; });
    CHECK(it->location == "VOTES:1");
  }

  TEST_CASE("count mismatch, unknown and duplicate projects in ballots") {
    CHECK(validate(parse_pb(replace_line(toy_text(), "num_votes; 10", "num_votes; 11"))).has("CountMismatch"));
    CHECK(validate(parse_pb(replace_line(toy_text(), "8; 27; f; 4", "8; 27; f; 3"))).has("UnknownProject"));
    CHECK(validate(parse_pb(replace_line(toy_text(), "8; 27; f; 4", "8; 27; f; 4,4"))).has("DuplicateVote"));
  }

  TEST_CASE("ballot cost bounds for approval") {
    auto f = toy_file();
    // Ballot costs range from 1000 (voter 7) to 3200 (voters 3 and 5).
    f.meta.set("max_sum_cost", "3200");
    f.meta.set("min_sum_cost", "1000");
    CHECK(validate(f).is_valid());
    f.meta.set("max_sum_cost", "3000");
    CHECK(validate(f).has("BallotCostTooHigh"));
    f.meta.set("max_sum_cost", "5000");
    f.meta.set("min_sum_cost", "1100");
    CHECK(validate(f).has("BallotCostTooLow"));
  }

  TEST_CASE("unknown META keys are warnings") {
    auto f = toy_file();
    f.meta.set("currency", "PLN");
    const auto report = validate(f);
    CHECK(report.is_valid());
    CHECK(report.count(Severity::warning) == 1);
    CHECK(report.has("UnknownMetaKey"));
  }

  TEST_CASE("cumulative constraints") {
    const auto f = parse_pb(kCumulative);
    CHECK(validate(f).is_valid());
    CHECK(f.votes[0].points == std::vector<Rational>{6, 4});

    auto missing = f;
    missing.meta.erase("max_sum_points");
    CHECK(validate(missing).has("MissingObligatoryField"));

    auto over = parse_pb(std::string(kCumulative).replace(std::string(kCumulative).find("b;9;10"), 6, "b;9;11"));
    CHECK(validate(over).has("SumPointsTooHigh"));
    CHECK(validate(over).has("PointsOutOfRange"));

    auto unsorted = f;
    unsorted.votes[0].points = std::vector<Rational>{4, 6};
    CHECK(validate(unsorted).has("PointsNotSorted"));

    auto mismatch = f;
    mismatch.votes[0].points = std::vector<Rational>{6};
    CHECK(validate(mismatch).has("PointsMismatch"));
  }

  TEST_CASE("defaults per vote type") {
    const auto approval = ballot_constraints(toy_file());
    CHECK(approval.min_length == 1);
    CHECK(approval.max_length == 3);
    CHECK(approval.min_sum_cost == 0);
    CHECK_FALSE(approval.max_sum_cost.has_value());

    auto no_max = toy_file();
    no_max.meta.erase("max_length");
    no_max.meta.erase("min_length");
    const auto defaults = ballot_constraints(no_max);
    CHECK(defaults.min_length == 1);
    CHECK(defaults.max_length == 5);

    auto ordinal = no_max;
    ordinal.meta.set("vote_type", "ordinal");
    const auto ord = ballot_constraints(ordinal);
    CHECK(ord.scoring_fn == "Borda");
    CHECK(ord.max_length == 5);

    const auto cumulative = ballot_constraints(parse_pb(kCumulative));
    CHECK(cumulative.min_length == 1);
    CHECK(cumulative.max_length == 3);
    CHECK(cumulative.min_points == Rational(0));
    CHECK(cumulative.max_points == Rational(10));
    CHECK(cumulative.min_sum_points == 0);
    CHECK(cumulative.max_sum_points == Rational(10));

    auto scoring = no_max;
    scoring.meta.set("vote_type", "scoring");
    const auto sc = ballot_constraints(scoring);
    CHECK_FALSE(sc.min_points.has_value());
    CHECK_FALSE(sc.max_points.has_value());
    CHECK(sc.default_score == 0);
    CHECK(sc.max_length == 5);
  }

  TEST_CASE("serialize round-trips the toy file") {
    const auto f = toy_file();
    const auto text = serialize(f);
    CHECK(parse_pb(text) == f);
    CHECK(serialize(parse_pb(text)) == text);
    CHECK(text.find("1; 600; culture,education\n") != std::string::npos);
    CHECK(text.find(" \n") == std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
  }

  TEST_CASE("extra META key is written verbatim") {
    auto f = toy_file();
    f.meta.set("comment", "test");
    CHECK(serialize(f).find("\ncomment; test\n") != std::string::npos);
  }

  TEST_CASE("zero-vote file writes only the VOTES header") {
    auto f = toy_file();
    f.votes.clear();
    f.meta.set("num_votes", "0");
    const auto text = serialize(f);
    CHECK(text.ends_with("VOTES\nvoter_id; age; sex; vote\n"));
    CHECK(parse_pb(text) == f);
  }

  TEST_CASE("decimal points survive a round trip") {
    auto f = parse_pb(kCumulative);
    f.votes[0].points = std::vector<Rational>{pbtk::make_rational(13, 2), pbtk::make_rational(7, 2)};
    const auto back = parse_pb(serialize(f));
    CHECK(back.votes[0].points == f.votes[0].points);
  }

  TEST_CASE("validate is pure") {
    const auto f = parse_pb(replace_line(toy_text(), "1; 34; f; 1,2,4", "1; 34; f; 1,2,4,5"));
    CHECK(validate(f).diagnostics == validate(f).diagnostics);
  }
}
