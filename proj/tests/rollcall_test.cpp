// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "ideal/errors.hpp"
#include "ideal/rollcall.hpp"

using namespace ideal;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/rollcall_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const char* kVotes =
    "id,V1,V2,V3,V4\n"
    "A1,SI,NO,ABSTENCION,AUSENTE\n"
    "A2,NO,SI,SI,NO-LISTADO\n"
    "A3,SI,SI,NO,SI\n";

const char* kMeta =
    "id,name,party,bloc,attribute_flag,anchor\n"
    "A1,Uno,P1,Opposition,1,-1\n"
    "A2,Dos,P2,Coalition,0,1\n"
    "A3,Tres,P1,Minority,1,\n";

}  // namespace

TEST_CASE("default token map covers the five states") {
    const TokenMap tm = TokenMap::defaults();
    CHECK(tm.parse("SI", "t") == Vote::Yes);
    CHECK(tm.parse("NO", "t") == Vote::No);
    CHECK(tm.parse("ABSTENCION", "t") == Vote::Abstain);
    CHECK(tm.parse("AUSENTE", "t") == Vote::Absent);
    CHECK(tm.parse("NO-LISTADO", "t") == Vote::NotListed);
    CHECK_THROWS_AS(tm.parse("MAYBE", "cell (1,2)"), ValidationError);
}

TEST_CASE("parse_rollcall reads matrix and roster together") {
    const auto vp = write_temp("v.csv", kVotes);
    const auto mp = write_temp("m.csv", kMeta);
    const auto [matrix, roster] = parse_rollcall(vp, mp);
    CHECK(matrix.n == 3);
    CHECK(matrix.m == 4);
    CHECK(matrix.at(0, 0) == Vote::Yes);
    CHECK(matrix.at(0, 3) == Vote::Absent);
    CHECK(matrix.at(1, 3) == Vote::NotListed);
    CHECK(matrix.list_ids[2] == "V3");
    REQUIRE(roster.size() == 3);
    CHECK(roster[0].bloc == Bloc::Opposition);
    CHECK(roster[0].attribute_flag);
    REQUIRE(roster[0].anchor.has_value());
    CHECK(*roster[0].anchor == -1.0);
    CHECK(*roster[1].anchor == 1.0);
    CHECK_FALSE(roster[2].anchor.has_value());
}

TEST_CASE("parse_rollcall rejects malformed inputs") {
    const auto vp = write_temp("v.csv", kVotes);
    const auto mp = write_temp("m.csv", kMeta);

    const auto no_lists = write_temp("nl.csv", "id\nA1\n");
    CHECK_THROWS_WITH_AS(parse_rollcall(no_lists, mp).first,
                         doctest::Contains("no vote lists"), ValidationError);

    const auto missing_meta = write_temp(
        "mm.csv",
        "id,name,party,bloc,attribute_flag,anchor\nA1,Uno,P1,Opposition,1,-1\n"
        "A2,Dos,P2,Coalition,0,1\n");
    CHECK_THROWS_AS(parse_rollcall(vp, missing_meta), ValidationError);

    const auto dup = write_temp("dup.csv",
                                "id,V1,V2\nA1,SI,NO\nA1,NO,SI\nA3,SI,SI\n");
    CHECK_THROWS_WITH_AS(parse_rollcall(dup, mp).first,
                         doctest::Contains("duplicate"), ValidationError);

    const auto three_anchors = write_temp(
        "a3.csv",
        "id,name,party,bloc,attribute_flag,anchor\nA1,U,P1,Opposition,1,-1\n"
        "A2,D,P2,Coalition,0,1\nA3,T,P1,Minority,1,0.5\n");
    CHECK_THROWS_WITH_AS(parse_rollcall(vp, three_anchors).first,
                         doctest::Contains("more than 2 anchored"), ValidationError);

    const auto equal_pins = write_temp(
        "aeq.csv",
        "id,name,party,bloc,attribute_flag,anchor\nA1,U,P1,Opposition,1,1\n"
        "A2,D,P2,Coalition,0,1\nA3,T,P1,Minority,1,\n");
    CHECK_THROWS_WITH_AS(parse_rollcall(vp, equal_pins).first,
                         doctest::Contains("must differ"), ValidationError);

    const auto bad_attr = write_temp(
        "ba.csv",
        "id,name,party,bloc,attribute_flag,anchor\nA1,U,P1,Opposition,2,-1\n"
        "A2,D,P2,Coalition,0,1\nA3,T,P1,Minority,1,\n");
    CHECK_THROWS_AS(parse_rollcall(vp, bad_attr), ValidationError);
}

TEST_CASE("encode_for_model maps the five states onto 1/0/missing") {
    VoteMatrix mx;
    mx.n = 2;
    mx.m = 2;
    mx.legislator_ids = {"A1", "A2"};
    mx.list_ids = {"V1", "V2"};
    mx.cells = {Vote::Yes, Vote::No, Vote::Absent, Vote::Yes};
    const ModelView view = encode_for_model(mx);
    CHECK(view.n_obs == 3);
    CHECK(view.at(0, 0) == 1);
    CHECK(view.at(0, 1) == 0);
    CHECK(view.at(1, 0) == -1);
    CHECK(view.at(1, 1) == 1);

    mx.cells = {Vote::Abstain, Vote::Absent, Vote::NotListed, Vote::Abstain};
    CHECK(encode_for_model(mx).n_obs == 0);
}

TEST_CASE("filter drops rows without any recorded vote") {
    VoteMatrix mx;
    mx.n = 5;
    mx.m = 2;
    mx.legislator_ids = {"A1", "A2", "A3", "A4", "A5"};
    mx.list_ids = {"V1", "V2"};
    mx.cells = {Vote::Yes,     Vote::No,         // A1 stays
                Vote::Abstain, Vote::NotListed,  // A2 dropped
                Vote::No,      Vote::Absent,     // A3 stays
                Vote::Absent,  Vote::Absent,     // A4 dropped
                Vote::Yes,     Vote::Yes};       // A5 stays
    Roster roster;
    for (const auto* id : {"A1", "A2", "A3", "A4", "A5"}) {
        LegislatorMeta lm;
        lm.id = id;
        roster.push_back(lm);
    }
    const FilterResult fr = filter_for_model(mx, roster);
    CHECK(fr.matrix.n == 3);
    CHECK(fr.roster.size() == 3);
    REQUIRE(fr.dropped_ids.size() == 2);
    CHECK(fr.dropped_ids[0] == "A2");
    CHECK(fr.dropped_ids[1] == "A4");
    // no retained row lost its votes
    const ModelView view = encode_for_model(fr.matrix);
    for (std::size_t i = 0; i < view.n; ++i) CHECK(view.row_observed(i) >= 1);

    // dropping below 3 rows is infeasible
    mx.cells[0] = Vote::NotListed;
    mx.cells[1] = Vote::NotListed;
    CHECK_THROWS_WITH_AS(filter_for_model(mx, roster),
                         doctest::Contains("model infeasible"), ValidationError);
}

TEST_CASE("descriptive percentages follow their definitions") {
    VoteMatrix mx;
    mx.n = 2;
    mx.m = 4;
    mx.legislator_ids = {"A1", "A2"};
    mx.list_ids = {"V1", "V2", "V3", "V4"};
    mx.cells = {Vote::Yes, Vote::Abstain, Vote::Absent, Vote::NotListed,
                Vote::Yes, Vote::Yes,     Vote::Yes,    Vote::Yes};
    Roster roster;
    for (const auto* id : {"A1", "A2"}) {
        LegislatorMeta lm;
        lm.id = id;
        lm.party = "P";
        roster.push_back(lm);
    }
    const DescriptiveStats ds = descriptive_stats(mx, roster);
    REQUIRE(ds.per_legislator.size() == 2);
    const auto& s = ds.per_legislator[0];
    CHECK(s.participation_pct == doctest::Approx(75.0));
    CHECK(s.attendance_defined);
    CHECK(s.attendance_pct == doctest::Approx(100.0 * 2 / 3));
    CHECK(s.abstention_defined);
    // abstention over cast votes {Yes, Abstain}: 1 of 2
    CHECK(s.abstention_pct == doctest::Approx(50.0));
    const auto& t = ds.per_legislator[1];
    CHECK(t.participation_pct == doctest::Approx(100.0));
    CHECK(t.attendance_pct == doctest::Approx(100.0));
    CHECK(t.abstention_pct == doctest::Approx(0.0));
}

TEST_CASE("a single listing out of 136 lists gives 0.74 percent participation") {
    VoteMatrix mx;
    mx.n = 1;
    mx.m = 136;
    mx.legislator_ids = {"A1"};
    for (std::size_t j = 0; j < mx.m; ++j) {
        mx.list_ids.push_back("V" + std::to_string(j + 1));
        mx.cells.push_back(Vote::NotListed);
    }
    mx.cells[17] = Vote::Yes;
    Roster roster(1);
    roster[0].id = "A1";
    const auto ds = descriptive_stats(mx, roster);
    CHECK(ds.per_legislator[0].participation_pct == doctest::Approx(100.0 / 136).epsilon(1e-12));
    CHECK(ds.per_legislator[0].participation_pct == doctest::Approx(0.74).epsilon(0.01));
}

TEST_CASE("undefined ratios are flagged, not invented") {
    VoteMatrix mx;
    mx.n = 1;
    mx.m = 2;
    mx.legislator_ids = {"A1"};
    mx.list_ids = {"V1", "V2"};
    mx.cells = {Vote::NotListed, Vote::NotListed};
    Roster roster(1);
    roster[0].id = "A1";
    const auto ds = descriptive_stats(mx, roster);
    CHECK(ds.per_legislator[0].participation_pct == doctest::Approx(0.0));
    CHECK_FALSE(ds.per_legislator[0].attendance_defined);
    CHECK_FALSE(ds.per_legislator[0].abstention_defined);

    mx.cells = {Vote::Absent, Vote::Absent};  // listed but never cast a vote
    const auto ds2 = descriptive_stats(mx, roster);
    CHECK(ds2.per_legislator[0].attendance_defined);
    CHECK(ds2.per_legislator[0].attendance_pct == doctest::Approx(0.0));
    CHECK_FALSE(ds2.per_legislator[0].abstention_defined);
}

TEST_CASE("five-number summary") {
    const FiveNum f = five_num({4.0, 1.0, 3.0, 2.0});
    CHECK(f.count == 4);
    CHECK(f.min == doctest::Approx(1.0));
    CHECK(f.q1 == doctest::Approx(1.75));
    CHECK(f.median == doctest::Approx(2.5));
    CHECK(f.q3 == doctest::Approx(3.25));
    CHECK(f.max == doctest::Approx(4.0));
    CHECK(five_num({}).count == 0);
}

TEST_CASE("group aggregation emits groups in sorted label order") {
    std::vector<LegislatorStats> stats(4);
    for (int i = 0; i < 4; ++i) {
        stats[i].id = "A" + std::to_string(i);
        stats[i].participation_pct = 10.0 * (i + 1);
        stats[i].attendance_defined = stats[i].abstention_defined = true;
    }
    const auto gs = group_stats(stats, {"P2", "P1", "P2", "P1"});
    REQUIRE(gs.size() == 2);
    CHECK(gs[0].group == "P1");
    CHECK(gs[0].members == 2);
    CHECK(gs[0].participation.min == doctest::Approx(20.0));
    CHECK(gs[0].participation.max == doctest::Approx(40.0));
    CHECK(gs[1].group == "P2");
    CHECK(gs[1].participation.max == doctest::Approx(30.0));
}

TEST_CASE("vote and meta writers round-trip through the parser") {
    const auto vp = write_temp("v.csv", kVotes);
    const auto mp = write_temp("m.csv", kMeta);
    const auto [matrix, roster] = parse_rollcall(vp, mp);
    write_votes_csv("/tmp/rollcall_test_rt_votes.csv", matrix);
    write_meta_csv("/tmp/rollcall_test_rt_meta.csv", roster);
    const auto [m2, r2] = parse_rollcall("/tmp/rollcall_test_rt_votes.csv",
                                         "/tmp/rollcall_test_rt_meta.csv");
    CHECK(m2.cells == matrix.cells);
    CHECK(m2.list_ids == matrix.list_ids);
    REQUIRE(r2.size() == roster.size());
    for (std::size_t i = 0; i < roster.size(); ++i) {
        CHECK(r2[i].id == roster[i].id);
        CHECK(r2[i].party == roster[i].party);
        CHECK(r2[i].bloc == roster[i].bloc);
        CHECK(r2[i].attribute_flag == roster[i].attribute_flag);
        CHECK(r2[i].anchor == roster[i].anchor);
    }
}

TEST_CASE("read_meta_csv accepts a custom attribute column") {
    const auto p = write_temp(
        "attr.csv",
        "id,name,party,bloc,scandal,anchor\nA1,U,P1,Opposition,1,-1\n"
        "A2,D,P2,Coalition,0,1\n");
    const Roster r = read_meta_csv(p, "scandal");
    REQUIRE(r.size() == 2);
    CHECK(r[0].attribute_flag);
    CHECK_FALSE(r[1].attribute_flag);
    CHECK_THROWS_AS(read_meta_csv(p, "attribute_flag"), ValidationError);
}
