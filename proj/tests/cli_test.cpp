// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* b = std::getenv("IDEAL_BIN");
    return b ? b : "../ideal";
}

std::string data_dir() {
    const char* d = std::getenv("IDEAL_DATA");
    return d ? d : "../../data";
}

const std::string kWork = "/tmp/cli_test_work";

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

RunResult run_cli(const std::string& args) {
    fs::create_directories(kWork);
    const std::string out_path = kWork + "/stdout.txt";
    const std::string err_path = kWork + "/stderr.txt";
    const std::string cmd = bin() + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

bool has(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string tiny_args() {
    return "--votes " + data_dir() + "/tiny_votes.csv --meta " + data_dir() +
           "/tiny_meta.csv";
}

// One shared small fit reused by the downstream-command cases.
const std::string& tiny_fit_dir() {
    static std::string dir;
    if (dir.empty()) {
        dir = kWork + "/tiny_fit";
        fs::remove_all(dir);
        const RunResult r = run_cli("fit " + tiny_args() +
                                    " --iterations 400 --warmup 200 --thin 2"
                                    " --chains 2 --seed 3 --out " + dir);
        REQUIRE(r.code == 0);
    }
    return dir;
}

// Quick fit of the bundled 40x120 recovery matrix, for the logistic command.
const std::string& recovery_fit_dir() {
    static std::string dir;
    if (dir.empty()) {
        dir = kWork + "/recovery_fit";
        fs::remove_all(dir);
        const RunResult r = run_cli("fit --votes " + data_dir() +
                                    "/recovery_votes.csv --meta " + data_dir() +
                                    "/recovery_meta.csv"
                                    " --iterations 700 --warmup 300 --thin 4"
                                    " --chains 2 --seed 3 --out " + dir);
        REQUIRE(r.code == 0);
    }
    return dir;
}

}  // namespace

TEST_CASE("help exits cleanly and lists the subcommands") {
    const RunResult r = run_cli("--help");
    CHECK(r.code == 0);
    for (const char* sub :
         {"describe", "fit", "summarize", "probs", "compare", "logit", "simulate", "oracle"})
        CHECK(has(r.out, sub));
}

TEST_CASE("a subcommand is required") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("--seed 4").code == 2);
}

TEST_CASE("unknown flags and bad values are usage errors") {
    CHECK(run_cli("describe " + tiny_args() + " --no-such-flag").code == 2);
    const RunResult r =
        run_cli("fit " + tiny_args() + " --link cauchy --out " + kWork + "/badlink");
    CHECK(r.code == 2);
    CHECK(has(r.err, "cauchy"));
}

TEST_CASE("describe writes the tables, plots and manifest") {
    const std::string out = kWork + "/describe";
    fs::remove_all(out);
    const RunResult r = run_cli("describe " + tiny_args() + " --out " + out);
    CHECK(r.code == 0);
    for (const char* f :
         {"stats_legislators.csv", "stats_by_party.csv", "stats_by_bloc.csv",
          "stats_by_attribute.csv", "stats_overall.csv", "list_counts.csv",
          "participation_hist.svg", "attendance_hist.svg", "abstention_hist.svg",
          "participation_by_party.svg", "attendance_by_party.svg",
          "abstention_by_party.svg", "participation_by_attribute.svg",
          "attendance_by_attribute.svg", "abstention_by_attribute.svg", "manifest.txt"})
        CHECK(fs::exists(out + "/" + f));
    CHECK(lines_of(out + "/stats_legislators.csv").size() == 4);  // header + 3 rows
    CHECK(has(slurp(out + "/manifest.txt"), "command = describe"));
}

TEST_CASE("missing input files exit with a data error") {
    const RunResult r = run_cli("describe --votes /nonexistent/v.csv --meta " + data_dir() +
                                "/tiny_meta.csv --out " + kWork + "/nope");
    CHECK(r.code == 2);
    CHECK(has(r.err, "error:"));
}

TEST_CASE("unknown config keys are rejected by name") {
    const std::string cfg = kWork + "/bad.cfg";
    fs::create_directories(kWork);
    std::ofstream(cfg) << "bogus_knob=1\n";
    const RunResult r = run_cli("describe " + tiny_args() + " --config " + cfg);
    CHECK(r.code == 2);
    CHECK(has(r.err, "bogus_knob"));
}

TEST_CASE("config files load and command-line flags override them") {
    const std::string cfg = kWork + "/sim.cfg";
    const std::string dir_a = kWork + "/sim_a";
    const std::string dir_b = kWork + "/sim_b";
    const std::string dir_c = kWork + "/sim_c";
    fs::create_directories(kWork);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    fs::remove_all(dir_c);
    std::ofstream(cfg) << "seed=5\nout=" << dir_a << "\nsim_n=8\nsim_m=6\n";

    // config alone: everything from the file
    CHECK(run_cli("simulate --config " + cfg).code == 0);
    CHECK(fs::exists(dir_a + "/votes.csv"));

    // flag overrides the configured output directory and seed
    CHECK(run_cli("simulate --config " + cfg + " --seed 9 --out " + dir_b).code == 0);
    CHECK(fs::exists(dir_b + "/votes.csv"));
    CHECK(slurp(dir_a + "/votes.csv") != slurp(dir_b + "/votes.csv"));

    // same effective settings, fresh run: byte-identical output
    CHECK(run_cli("simulate --config " + cfg + " --seed 9 --out " + dir_c).code == 0);
    CHECK(slurp(dir_b + "/votes.csv") == slurp(dir_c + "/votes.csv"));
    CHECK(slurp(dir_b + "/meta.csv") == slurp(dir_c + "/meta.csv"));
    CHECK(slurp(dir_b + "/truth.csv") == slurp(dir_c + "/truth.csv"));
}

TEST_CASE("fit writes draws, roster echo, diagnostics and manifest") {
    const std::string& dir = tiny_fit_dir();
    for (const char* f : {"draws_chain1.csv", "draws_chain2.csv", "roster.csv",
                          "diagnostics.csv", "diagnostics_panel.svg", "lp_trace.svg",
                          "manifest.txt"})
        CHECK(fs::exists(dir + "/" + f));
    const std::string man = slurp(dir + "/manifest.txt");
    CHECK(has(man, "command = fit"));
    CHECK(has(man, "retained_per_chain = 100"));
    CHECK(has(man, "seed = 3"));
    CHECK(has(man, "p_dim = 5"));  // 2 lists x 2 + 1 free member
    // draws file: header (params + lp) and one line per retained draw
    const auto draws = lines_of(dir + "/draws_chain1.csv");
    REQUIRE(draws.size() == 101);
    CHECK(draws[0] == "mu_1,mu_2,alpha_1,alpha_2,beta_T03,lp");
}

TEST_CASE("unknown anchor ids are named in the error") {
    const RunResult r = run_cli("fit " + tiny_args() +
                                " --anchor1 NOPE:-1 --anchor2 T02:1 --out " + kWork +
                                "/anchor_fail");
    CHECK(r.code == 2);
    CHECK(has(r.err, "NOPE"));
    // both anchors on the same member is rejected too
    const RunResult r2 = run_cli("fit " + tiny_args() + " --anchor1 T01:-1 --anchor2 T01:1" +
                                 " --out " + kWork + "/anchor_fail2");
    CHECK(r2.code == 2);
    // anchors may only be overridden as a pair
    const RunResult r3 = run_cli("fit " + tiny_args() + " --anchor1 T01:-1 --out " + kWork +
                                 "/anchor_fail3");
    CHECK(r3.code == 2);
    CHECK(has(r3.err, "pair"));
}

TEST_CASE("a single chain runs but warns that convergence checks need two") {
    const std::string out = kWork + "/one_chain";
    fs::remove_all(out);
    const RunResult r = run_cli("fit " + tiny_args() +
                                " --iterations 400 --warmup 200 --thin 2 --chains 1" +
                                " --seed 3 --out " + out);
    CHECK(r.code == 0);
    CHECK(has(r.err, "chain"));
    CHECK(fs::exists(out + "/draws_chain1.csv"));
    CHECK_FALSE(fs::exists(out + "/draws_chain2.csv"));
}

TEST_CASE("summarize writes summaries, groups and the caterpillar plot") {
    const std::string out = kWork + "/summ";
    fs::remove_all(out);
    const RunResult r = run_cli("summarize --run " + tiny_fit_dir() +
                                " --density-ids T03 --out " + out);
    CHECK(r.code == 0);
    for (const char* f : {"summary_items.csv", "summary_betas.csv", "groups_party.csv",
                          "groups_bloc.csv", "caterpillar.svg", "density_T03.svg",
                          "manifest.txt"})
        CHECK(fs::exists(out + "/" + f));
    const auto betas = lines_of(out + "/summary_betas.csv");
    REQUIRE(betas.size() == 4);
    CHECK(betas[0] == "id,anchored,mean,sd,median,ci_low,ci_high,significant");
    CHECK(betas[1].rfind("T01,1,-1,", 0) == 0);  // anchored rows carry the pin
    CHECK(betas[2].rfind("T02,1,1,", 0) == 0);
    CHECK(betas[3].rfind("T03,0,", 0) == 0);
}

TEST_CASE("density plots for anchored or unknown members are refused") {
    const RunResult r = run_cli("summarize --run " + tiny_fit_dir() +
                                " --density-ids T01 --out " + kWork + "/summ_bad");
    CHECK(r.code == 2);
    CHECK(has(r.err, "T01"));
}

TEST_CASE("region probabilities put anchors on their pins") {
    const std::string out = kWork + "/probs";
    fs::remove_all(out);
    const RunResult r = run_cli("probs --run " + tiny_fit_dir() +
                                " --regions -inf:0,0:inf --out " + out);
    CHECK(r.code == 0);
    const auto rows = lines_of(out + "/region_probs.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].rfind("T01,-1,1,0", 0) == 0);  // pin -1 lands in (-inf,0]
    CHECK(rows[2].rfind("T02,1,0,1", 0) == 0);   // pin +1 lands in (0,inf)
    CHECK(rows[3].rfind("T03,", 0) == 0);
}

TEST_CASE("malformed region bounds are usage errors") {
    CHECK(run_cli("probs --run " + tiny_fit_dir() + " --regions 1:zzz --out " + kWork +
                  "/probs_bad").code == 2);
    // lo must be strictly below hi
    CHECK(run_cli("probs --run " + tiny_fit_dir() + " --regions 2:1 --out " + kWork +
                  "/probs_bad2").code == 2);
}

TEST_CASE("comparing a run against itself is perfectly concordant") {
    const std::string out = kWork + "/cmp";
    fs::remove_all(out);
    const RunResult r = run_cli("compare --run-a " + tiny_fit_dir() + " --run-b " +
                                tiny_fit_dir() + " --out " + out);
    CHECK(r.code == 0);
    CHECK(fs::exists(out + "/compare.csv"));
    CHECK(fs::exists(out + "/compare_scatter.svg"));
    CHECK(has(slurp(out + "/manifest.txt"), "spearman = 1"));
    CHECK(lines_of(out + "/compare.csv").size() == 4);
    CHECK(has(r.out, "spearman"));
}

TEST_CASE("the logistic command needs a large enough roster") {
    const RunResult r =
        run_cli("logit --run " + tiny_fit_dir() + " --out " + kWork + "/logit_small");
    CHECK(r.code == 2);
    CHECK(has(r.err, "10"));
}

TEST_CASE("the logistic command reports the fit and its diagnostics") {
    const std::string out = kWork + "/logit";
    fs::remove_all(out);
    const RunResult r = run_cli("logit --run " + recovery_fit_dir() +
                                " --bayes-iterations 1500 --bayes-warmup 300" +
                                " --bayes-chains 2 --seed 7 --out " + out);
    CHECK(r.code == 0);
    for (const char* f :
         {"logit_report.txt", "roc.csv", "roc.svg", "cooks.csv", "cooks.svg", "manifest.txt"})
        CHECK(fs::exists(out + "/" + f));
    const std::string rep = slurp(out + "/logit_report.txt");
    for (const char* key :
         {"n = 40", "estimate_x = ", "se_x = ", "p_x = ", "lrt_statistic = ",
          "odds_ratio_x = ", "auc = ", "box_tidwell_p = ", "cooks_threshold = ",
          "bayes_x_mean = ", "bayes_accept_rate = "})
        CHECK(has(rep, key));
    CHECK(lines_of(out + "/cooks.csv").size() == 41);  // header + one row per member
}

TEST_CASE("rerunning every stage with the same seed is byte-identical") {
    const std::string fit2 = kWork + "/tiny_fit2";
    fs::remove_all(fit2);
    REQUIRE(run_cli("fit " + tiny_args() +
                    " --iterations 400 --warmup 200 --thin 2 --chains 2 --seed 3 --out " +
                    fit2).code == 0);
    CHECK(slurp(fit2 + "/draws_chain1.csv") == slurp(tiny_fit_dir() + "/draws_chain1.csv"));
    CHECK(slurp(fit2 + "/draws_chain2.csv") == slurp(tiny_fit_dir() + "/draws_chain2.csv"));
    CHECK(slurp(fit2 + "/diagnostics.csv") == slurp(tiny_fit_dir() + "/diagnostics.csv"));

    const std::string s1 = kWork + "/summ1", s2 = kWork + "/summ2";
    fs::remove_all(s1);
    fs::remove_all(s2);
    REQUIRE(run_cli("summarize --run " + tiny_fit_dir() + " --out " + s1).code == 0);
    REQUIRE(run_cli("summarize --run " + tiny_fit_dir() + " --out " + s2).code == 0);
    CHECK(slurp(s1 + "/summary_betas.csv") == slurp(s2 + "/summary_betas.csv"));
    CHECK(slurp(s1 + "/summary_items.csv") == slurp(s2 + "/summary_items.csv"));

    const std::string d1 = kWork + "/desc1", d2 = kWork + "/desc2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    REQUIRE(run_cli("describe " + tiny_args() + " --out " + d1).code == 0);
    REQUIRE(run_cli("describe " + tiny_args() + " --out " + d2).code == 0);
    CHECK(slurp(d1 + "/stats_legislators.csv") == slurp(d2 + "/stats_legislators.csv"));
    CHECK(slurp(d1 + "/stats_by_party.csv") == slurp(d2 + "/stats_by_party.csv"));
}

TEST_CASE("the oracle command tabulates dense-grid moments") {
    const std::string out = kWork + "/oracle";
    fs::remove_all(out);
    const RunResult r = run_cli("oracle " + tiny_args() + " --A0 2.25 --out " + out);
    CHECK(r.code == 0);
    const auto rows = lines_of(out + "/oracle_moments.csv");
    REQUIRE(rows.size() == 6);  // header + mu_1, mu_2, alpha_1, alpha_2, beta_T03
    CHECK(rows[0] == "param,mean,sd");
    CHECK(rows[5].rfind("beta_T03,", 0) == 0);
    const std::string man = slurp(out + "/manifest.txt");
    CHECK(has(man, "grid_points = 41"));
    CHECK(has(man, "command = oracle"));
}
