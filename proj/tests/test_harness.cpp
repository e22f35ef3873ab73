#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "varharm/harness.hpp"

using namespace varharm;

TEST_CASE("registered targets") {
    auto targets = harness::registered_targets();
    CHECK(targets.size() == 15);
    for (const auto& t : targets) CHECK(!harness::describe(t).empty());
    CHECK_THROWS(harness::describe("nope"));
    harness::Config bad;
    bad.target = "nope";
    CHECK_THROWS_AS(harness::run(bad), std::invalid_argument);
}

TEST_CASE("config json round trip") {
    harness::Config c;
    c.target = "ineqmax";
    c.N = 64;
    c.seed = 7;
    c.alpha = 0.0;
    harness::Config back = harness::Config::from_json_text(c.to_json_text());
    CHECK(back.target == c.target);
    CHECK(back.N == 64);
    CHECK(back.seed == 7);
    CHECK(back.alpha == 0.0);
    CHECK(harness::Config::from_json_text("{}").resolved_N() == 1024);
}

TEST_CASE("remark22 target") {
    harness::Config c;
    c.target = "remark22-exponents";
    c.N = 128;
    harness::Report rep = harness::run(c);
    CHECK(rep.verdict == "pass");
    CHECK(rep.exit_code() == 0);
    CHECK(rep.cases.size() == 3);
}

TEST_CASE("ineqmax target at small scale") {
    harness::Config c;
    c.target = "ineqmax";
    c.N = 64;
    c.L = 2.0;
    c.trials = 5;
    harness::Report rep = harness::run(c);
    CHECK(rep.verdict == "pass");
    CHECK(rep.cases.front().value == 0.0);
}

TEST_CASE("lemma1 target at small scale") {
    harness::Config c;
    c.target = "lemma1-quasinorm";
    c.N = 64;
    c.L = 2.0;
    c.trials = 15;
    harness::Report rep = harness::run(c);
    CHECK(rep.verdict == "pass");
}

TEST_CASE("lemma4 determinism and report files") {
    harness::Config c;
    c.target = "lemma4-dilation";
    c.N = 128;
    c.L = 4.0;
    c.trials = 6;
    c.refine = false;
    auto dir = std::filesystem::temp_directory_path() / "varharm_harness_test";
    std::filesystem::create_directories(dir);
    c.out_path = (dir / "report.json").string();
    c.csv_dir = dir.string();
    harness::Report r1 = harness::run(c);
    harness::Report r2 = harness::run(c);
    CHECK(r1.verdict == "pass");
    // wall time differs between runs; everything else must not
    r1.wall_ms = r2.wall_ms = 0.0;
    CHECK(r1.to_json_text() == r2.to_json_text());
    CHECK(std::filesystem::exists(c.out_path));
    CHECK(std::filesystem::exists(dir / "lemma4-dilation.csv"));
}

TEST_CASE("lemma12 target") {
    harness::Config c;
    c.target = "lemma12-rh";
    c.N = 256;
    c.L = 4.0;
    c.refine = false;
    harness::Report rep = harness::run(c);
    CHECK(rep.verdict == "pass");
}

TEST_CASE("lemma13 target records a finite constant") {
    harness::Config c;
    c.target = "lemma13-vector";
    c.N = 128;
    c.L = 4.0;
    c.trials = 2;
    c.refine = false;
    harness::Report rep = harness::run(c);
    CHECK(rep.verdict == "pass");
    CHECK(rep.constants.count("C_vector") == 1);
    CHECK(rep.constants.at("C_vector") > 0.0);
}

TEST_CASE("lemma14 target") {
    harness::Config c;
    c.target = "lemma14-weaktype";
    c.N = 256;
    c.L = 4.0;
    c.refine = false;
    harness::Report rep = harness::run(c);
    CHECK(rep.verdict == "pass");
    CHECK(rep.constants.count("C_weak") == 1);
}

TEST_CASE("stability refit fills refined constants") {
    harness::Config c;
    c.target = "lemma13-vector";
    c.N = 64;
    c.L = 2.0;
    c.trials = 1;
    c.refine = true;
    harness::Report rep = harness::run(c);
    CHECK(!rep.constants_refined.empty());
    CHECK(rep.stability >= 0.0);
}

TEST_CASE("theorem21 smoke run") {
    harness::Config c;
    c.target = "theorem21";
    c.N = 256;
    c.L = 8.0;
    c.alpha = 0.5;
    c.atom_count = 8;
    c.refine = false;
    harness::Report rep = harness::run(c);
    CHECK(rep.constants.count("C_uniform") == 1);
    CHECK(rep.constants.count("aux_slope") == 1);
    CHECK(!rep.header_note.empty());
}
