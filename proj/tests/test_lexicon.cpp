#include <doctest.h>

#include <algorithm>

#include "fairtext/errors.hpp"
#include "fairtext/lexicon.hpp"
#include "helpers.hpp"

using namespace fairtext;
namespace ft = fairtext::testing;

TEST_CASE("lexicon TSV parsing preserves counterpart order") {
    auto dir = ft::scratch_dir("lex_parse");
    auto path = ft::write_file(dir, "lex.tsv",
                               "# comment\n"
                               "dada\tmale\tdadii|idid|ebouid\n"
                               "s/tRii\tfemale\tsWamii\n");
    auto lex = GenderedLexicon::load(path);
    CHECK(lex.term_count() == 2);

    const auto* cps = lex.counterparts("dada");
    REQUIRE(cps != nullptr);
    CHECK(*cps == std::vector<std::string>{"dadii", "idid", "ebouid"});

    cps = lex.counterparts("s/tRii");
    REQUIRE(cps != nullptr);
    CHECK(*cps == std::vector<std::string>{"sWamii"});

    CHECK(lex.counterparts("absent") == nullptr);
    CHECK(lex.find("dada")->gender == Gender::male);
}

TEST_CASE("empty lexicon file loads with zero terms") {
    auto dir = ft::scratch_dir("lex_empty");
    auto path = ft::write_file(dir, "lex.tsv", "# nothing here\n\n");
    auto lex = GenderedLexicon::load(path);
    CHECK(lex.term_count() == 0);
}

TEST_CASE("lexicon load rejects bad entries") {
    auto dir = ft::scratch_dir("lex_bad");

    SUBCASE("self-loop") {
        auto path = ft::write_file(dir, "a.tsv", "dada\tmale\tdada|dadii\n");
        CHECK_THROWS_AS(GenderedLexicon::load(path), ValidationError);
    }
    SUBCASE("duplicate key term") {
        auto path = ft::write_file(dir, "b.tsv",
                                   "dada\tmale\tdadii\ndada\tmale\tidid\n");
        CHECK_THROWS_AS(GenderedLexicon::load(path), ValidationError);
    }
    SUBCASE("empty counterpart list") {
        auto path = ft::write_file(dir, "c.tsv", "dada\tmale\t\n");
        CHECK_THROWS_AS(GenderedLexicon::load(path), ValidationError);
    }
    SUBCASE("wrong column count reports the line number") {
        auto path = ft::write_file(dir, "d.tsv",
                                   "dada\tmale\tdadii\nbroken line\n");
        try {
            GenderedLexicon::load(path);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("2") != std::string::npos);
        }
    }
    SUBCASE("unknown gender tag") {
        auto path = ft::write_file(dir, "e.tsv", "dada\tneuter\tdadii\n");
        CHECK_THROWS_AS(GenderedLexicon::load(path), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(GenderedLexicon::load(dir / "nope.tsv"), IoError);
    }
}

TEST_CASE("gazetteer loads, enforces disjoint non-empty sections") {
    auto dir = ft::scratch_dir("gaz");

    SUBCASE("bundled file has 30 names per gender") {
        auto gaz = NameGazetteer::load(ft::bundled_data_dir() / "names.tsv");
        CHECK(gaz.names(Gender::male).size() == 30);
        CHECK(gaz.names(Gender::female).size() == 30);
        CHECK(gaz.gender_of("not-a-name") == std::nullopt);
    }
    SUBCASE("overlapping name rejected") {
        auto path = ft::write_file(dir, "overlap.tsv",
                                   "karim\tmale\nkarim\tfemale\n");
        try {
            NameGazetteer::load(path);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("karim") != std::string::npos);
        }
    }
    SUBCASE("empty female section rejected") {
        auto path = ft::write_file(dir, "male_only.tsv", "karim\tmale\n");
        CHECK_THROWS_AS(NameGazetteer::load(path), ValidationError);
    }
}

TEST_CASE("validate flags counterpart-only and asymmetric entries") {
    SUBCASE("symmetric pair is clean") {
        auto lex = GenderedLexicon::from_entries({
            {"A", {Gender::male, {"B"}}},
            {"B", {Gender::female, {"A"}}},
        });
        CHECK(lex.validate().clean());
    }
    SUBCASE("counterpart absent as key is flagged") {
        auto lex = GenderedLexicon::from_entries({{"A", {Gender::male, {"B"}}}});
        auto report = lex.validate();
        REQUIRE(report.counterpart_only.size() == 1);
        CHECK(report.counterpart_only[0] == "B");
    }
    SUBCASE("one-way listing is asymmetric") {
        auto lex = GenderedLexicon::from_entries({
            {"A", {Gender::male, {"B"}}},
            {"B", {Gender::female, {"C"}}},
            {"C", {Gender::male, {"B"}}},
        });
        auto report = lex.validate();
        REQUIRE(report.asymmetric.size() == 1);
        CHECK(report.asymmetric[0] == std::pair<std::string, std::string>{"A", "B"});
    }
    SUBCASE("same-gender counterpart is a conflict") {
        auto lex = GenderedLexicon::from_entries({
            {"A", {Gender::male, {"B"}}},
            {"B", {Gender::male, {"A"}}},
        });
        auto report = lex.validate();
        CHECK(report.gender_conflicts.size() == 2);
    }
}

TEST_CASE("bundled lexicon validation matches frozen counts") {
    auto lex = GenderedLexicon::load(ft::bundled_data_dir() / "lexicon.tsv");
    auto report = lex.validate();
    // Frozen from a one-time run over the bundled data: the only findings are
    // multi-word phrases that appear as counterparts but not as keys.
    CHECK(report.counterpart_only.size() == 25);
    CHECK(report.asymmetric.empty());
    CHECK(report.gender_conflicts.empty());
    for (const auto& phrase : report.counterpart_only) {
        CHECK(phrase.find(' ') != std::string::npos);
    }
}

TEST_CASE("no bundled term lists itself as a counterpart") {
    auto lex = GenderedLexicon::load(ft::bundled_data_dir() / "lexicon.tsv");
    for (const auto& [term, entry] : lex.entries()) {
        CHECK(std::find(entry.counterparts.begin(), entry.counterparts.end(),
                        term) == entry.counterparts.end());
    }
}

TEST_CASE("lexicon save/load round-trips exactly") {
    auto lex = GenderedLexicon::load(ft::bundled_data_dir() / "lexicon.tsv");
    auto dir = ft::scratch_dir("lex_roundtrip");
    lex.save(dir / "copy.tsv");
    auto again = GenderedLexicon::load(dir / "copy.tsv");

    REQUIRE(again.term_count() == lex.term_count());
    for (std::size_t i = 0; i < lex.entries().size(); ++i) {
        const auto& [term, entry] = lex.entries()[i];
        const auto& [term2, entry2] = again.entries()[i];
        CHECK(term == term2);
        CHECK(entry.gender == entry2.gender);
        CHECK(entry.counterparts == entry2.counterparts);
    }
}

TEST_CASE("counterpart word lookup covers multi-word phrases") {
    auto lex = GenderedLexicon::from_entries({
        {"Dak/tar", {Gender::male, {"miHla Dak/tar"}}},
    });
    CHECK(lex.is_counterpart_word("miHla"));
    CHECK(lex.is_counterpart_word("Dak/tar"));
    CHECK_FALSE(lex.is_counterpart_word("miHla Dak/tar"));
    CHECK_FALSE(lex.is_counterpart_word("other"));
}
