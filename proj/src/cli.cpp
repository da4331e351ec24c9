// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ideal/csv.hpp"
#include "ideal/diagnostics.hpp"
#include "ideal/errors.hpp"
#include "ideal/keyval.hpp"
#include "ideal/logistic.hpp"
#include "ideal/mathutil.hpp"
#include "ideal/mcmc.hpp"
#include "ideal/posterior.hpp"
#include "ideal/rollcall.hpp"
#include "ideal/spatial.hpp"
#include "ideal/svgplot.hpp"
#include "ideal/synthetic.hpp"

namespace ideal {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string config_path;
    std::string votes, meta;
    std::string out = "out";
    std::string link = "logit";
    double alpha0 = 0.0, A0 = 25.0, b = 0.0, B = 1.0;
    std::string anchor1, anchor2;  // "ID" or "ID:PIN"
    long long iterations = 80000, warmup = 16000, thin = 5;
    int chains = 4;
    std::uint64_t seed = 1;
    std::string init_rule = "bloc_signs";
    long long adapt_window = 50;
    double ci_level = 0.95;
    std::string regions = "-inf:-1,1:inf,-0.2:0.2";
    std::string attribute_column = "attribute_flag";
    std::string density_ids;
    std::string run, run_a, run_b;
    // synthetic generation
    long long sim_n = 40, sim_m = 120;
    double sim_missing = 0.2;
    double sim_beta_sd = 1.0, sim_mu_sd = 1.0, sim_alpha_sd = 1.0;
    double sim_attr_intercept = -1.0, sim_attr_slope = 0.8;
    std::string rates;
    // sensitivity-harness sampler settings (kept apart from the fit defaults)
    long long sens_iterations = 4000, sens_warmup = 1000, sens_thin = 3;
    int sens_chains = 2;
    // Bayesian logistic settings
    double bayes_prior_sd = 10.0;
    long long bayes_iterations = 6000, bayes_warmup = 1000;
    int bayes_chains = 4;
    // quadrature settings
    int oracle_grid = 41;
    double oracle_lo = -6.0, oracle_hi = 6.0;
};

const std::set<std::string> kConfigKeys = {
    "votes", "meta", "out", "link", "alpha0", "A0", "b", "B", "anchor1", "anchor2",
    "iterations", "warmup", "thin", "chains", "seed", "init_rule", "adapt_window",
    "ci_level", "regions", "attribute_column", "density_ids", "run", "run_a", "run_b",
    "sim_n", "sim_m", "sim_missing", "sim_beta_sd", "sim_mu_sd", "sim_alpha_sd",
    "sim_attr_intercept", "sim_attr_slope", "rates", "sens_iterations", "sens_warmup",
    "sens_thin", "sens_chains", "bayes_prior_sd", "bayes_iterations", "bayes_warmup",
    "bayes_chains", "oracle_grid", "oracle_lo", "oracle_hi"};

void apply_config_file(RunConfig& rc, const std::string& path) {
    const auto kv = read_keyval(path);
    for (const auto& [k, v] : kv) {
        if (!kConfigKeys.count(k))
            throw ValidationError(path + ": unknown config key '" + k + "'");
        if (k == "votes") rc.votes = v;
        else if (k == "meta") rc.meta = v;
        else if (k == "out") rc.out = v;
        else if (k == "link") rc.link = v;
        else if (k == "alpha0") rc.alpha0 = kv_double(kv, k);
        else if (k == "A0") rc.A0 = kv_double(kv, k);
        else if (k == "b") rc.b = kv_double(kv, k);
        else if (k == "B") rc.B = kv_double(kv, k);
        else if (k == "anchor1") rc.anchor1 = v;
        else if (k == "anchor2") rc.anchor2 = v;
        else if (k == "iterations") rc.iterations = kv_int(kv, k);
        else if (k == "warmup") rc.warmup = kv_int(kv, k);
        else if (k == "thin") rc.thin = kv_int(kv, k);
        else if (k == "chains") rc.chains = static_cast<int>(kv_int(kv, k));
        else if (k == "seed") rc.seed = static_cast<std::uint64_t>(kv_int(kv, k));
        else if (k == "init_rule") rc.init_rule = v;
        else if (k == "adapt_window") rc.adapt_window = kv_int(kv, k);
        else if (k == "ci_level") rc.ci_level = kv_double(kv, k);
        else if (k == "regions") rc.regions = v;
        else if (k == "attribute_column") rc.attribute_column = v;
        else if (k == "density_ids") rc.density_ids = v;
        else if (k == "run") rc.run = v;
        else if (k == "run_a") rc.run_a = v;
        else if (k == "run_b") rc.run_b = v;
        else if (k == "sim_n") rc.sim_n = kv_int(kv, k);
        else if (k == "sim_m") rc.sim_m = kv_int(kv, k);
        else if (k == "sim_missing") rc.sim_missing = kv_double(kv, k);
        else if (k == "sim_beta_sd") rc.sim_beta_sd = kv_double(kv, k);
        else if (k == "sim_mu_sd") rc.sim_mu_sd = kv_double(kv, k);
        else if (k == "sim_alpha_sd") rc.sim_alpha_sd = kv_double(kv, k);
        else if (k == "sim_attr_intercept") rc.sim_attr_intercept = kv_double(kv, k);
        else if (k == "sim_attr_slope") rc.sim_attr_slope = kv_double(kv, k);
        else if (k == "rates") rc.rates = v;
        else if (k == "sens_iterations") rc.sens_iterations = kv_int(kv, k);
        else if (k == "sens_warmup") rc.sens_warmup = kv_int(kv, k);
        else if (k == "sens_thin") rc.sens_thin = kv_int(kv, k);
        else if (k == "sens_chains") rc.sens_chains = static_cast<int>(kv_int(kv, k));
        else if (k == "bayes_prior_sd") rc.bayes_prior_sd = kv_double(kv, k);
        else if (k == "bayes_iterations") rc.bayes_iterations = kv_int(kv, k);
        else if (k == "bayes_warmup") rc.bayes_warmup = kv_int(kv, k);
        else if (k == "bayes_chains") rc.bayes_chains = static_cast<int>(kv_int(kv, k));
        else if (k == "oracle_grid") rc.oracle_grid = static_cast<int>(kv_int(kv, k));
        else if (k == "oracle_lo") rc.oracle_lo = kv_double(kv, k);
        else if (k == "oracle_hi") rc.oracle_hi = kv_double(kv, k);
    }
}

McmcConfig mcmc_config(const RunConfig& rc) {
    McmcConfig mc;
    mc.iterations = rc.iterations;
    mc.warmup = rc.warmup;
    mc.thin = rc.thin;
    mc.chains = rc.chains;
    mc.seed = rc.seed;
    mc.init_rule = parse_init_rule(rc.init_rule);
    mc.adapt_window = rc.adapt_window;
    return mc;
}

PriorSpec prior_spec(const RunConfig& rc) {
    PriorSpec p;
    p.alpha0 = rc.alpha0;
    p.A0 = rc.A0;
    p.b = rc.b;
    p.B = rc.B;
    p.validate();
    return p;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_bound(const std::string& s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad region bound '" + s + "'");
    }
}

struct Region {
    double lo, hi;
    std::string label;
};

std::vector<Region> parse_regions(const std::string& spec) {
    std::vector<Region> out;
    for (const auto& tok : split_list(spec, ',')) {
        const auto parts = split_list(tok, ':');
        if (parts.size() != 2)
            throw ValidationError("region '" + tok + "' is not of the form lo:hi");
        Region r;
        r.lo = parse_bound(parts[0]);
        r.hi = parse_bound(parts[1]);
        if (!(r.hi > r.lo)) throw ValidationError("region '" + tok + "' needs hi > lo");
        r.label = "p_" + parts[0] + "_" + parts[1];
        out.push_back(r);
    }
    if (out.empty()) throw ValidationError("no regions given");
    return out;
}

// Apply --anchor1/--anchor2 "ID[:PIN]" overrides onto the roster.
void apply_anchors(Roster& roster, const std::string& a1, const std::string& a2) {
    if (a1.empty() && a2.empty()) return;
    if (a1.empty() || a2.empty())
        throw ValidationError("anchors must be overridden in pairs (anchor1 and anchor2)");
    auto parse_one = [](const std::string& s, double def_pin) {
        const auto parts = split_list(s, ':');
        if (parts.size() == 1) return std::make_pair(parts[0], def_pin);
        if (parts.size() == 2) return std::make_pair(parts[0], parse_bound(parts[1]));
        throw ValidationError("anchor '" + s + "' is not of the form ID or ID:PIN");
    };
    const auto [id1, pin1] = parse_one(a1, -1.0);
    const auto [id2, pin2] = parse_one(a2, 1.0);
    if (id1 == id2) throw ValidationError("anchor ids must differ, got '" + id1 + "' twice");
    if (pin1 == pin2) throw ValidationError("anchor pins must differ");
    bool f1 = false, f2 = false;
    for (auto& lm : roster) {
        lm.anchor.reset();
        if (lm.id == id1) {
            lm.anchor = pin1;
            f1 = true;
        } else if (lm.id == id2) {
            lm.anchor = pin2;
            f2 = true;
        }
    }
    if (!f1) throw ValidationError("anchor id '" + id1 + "' not found in roster");
    if (!f2) throw ValidationError("anchor id '" + id2 + "' not found in roster");
}

void ensure_outdir(const std::string& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw ValidationError("cannot create output directory " + out);
}

void write_group_stats_csv(const std::string& path, const std::vector<GroupStats>& gs) {
    CsvWriter w(path);
    w.row({"group", "members", "metric", "count", "min", "q1", "median", "q3", "max"});
    for (const auto& g : gs) {
        const std::pair<std::string, const FiveNum*> metrics[] = {
            {"participation", &g.participation},
            {"attendance", &g.attendance},
            {"abstention", &g.abstention}};
        for (const auto& [name, f] : metrics) {
            if (f->count == 0) {
                w.row({g.group, fmt_int((long long)g.members), name, "0", "NA", "NA", "NA",
                       "NA", "NA"});
            } else {
                w.row({g.group, fmt_int((long long)g.members), name,
                       fmt_int((long long)f->count), fmt_num(f->min), fmt_num(f->q1),
                       fmt_num(f->median), fmt_num(f->q3), fmt_num(f->max)});
            }
        }
    }
    w.close();
}

std::vector<std::pair<std::string, FiveNum>> metric_boxes(
    const std::vector<GroupStats>& gs, int which) {
    std::vector<std::pair<std::string, FiveNum>> out;
    for (const auto& g : gs)
        out.emplace_back(g.group, which == 0   ? g.participation
                                  : which == 1 ? g.attendance
                                               : g.abstention);
    return out;
}

int cmd_describe(const RunConfig& rc) {
    if (rc.votes.empty() || rc.meta.empty())
        throw ValidationError("describe needs --votes and --meta");
    const auto [matrix, roster] =
        parse_rollcall(rc.votes, rc.meta, TokenMap::defaults(), rc.attribute_column);
    const DescriptiveStats ds = descriptive_stats(matrix, roster);
    ensure_outdir(rc.out);

    {
        CsvWriter w(rc.out + "/stats_legislators.csv");
        w.row({"id", "participation_pct", "attendance_pct", "abstention_pct"});
        for (const auto& s : ds.per_legislator)
            w.row({s.id, fmt_num(s.participation_pct),
                   s.attendance_defined ? fmt_num(s.attendance_pct) : "NA",
                   s.abstention_defined ? fmt_num(s.abstention_pct) : "NA"});
        w.close();
    }
    write_group_stats_csv(rc.out + "/stats_by_party.csv", ds.by_party);
    write_group_stats_csv(rc.out + "/stats_by_bloc.csv", ds.by_bloc);

    std::vector<std::string> attr_labels, all_labels;
    for (const auto& lm : roster) {
        attr_labels.push_back(lm.attribute_flag ? "1" : "0");
        all_labels.push_back("all");
    }
    const auto by_attr = group_stats(ds.per_legislator, attr_labels);
    const auto overall = group_stats(ds.per_legislator, all_labels);
    write_group_stats_csv(rc.out + "/stats_by_attribute.csv", by_attr);
    write_group_stats_csv(rc.out + "/stats_overall.csv", overall);

    {
        CsvWriter w(rc.out + "/list_counts.csv");
        w.row({"list_id", "yes", "no", "abstain", "absent", "not_listed"});
        for (std::size_t j = 0; j < matrix.m; ++j) {
            long long c[5] = {0, 0, 0, 0, 0};
            for (std::size_t i = 0; i < matrix.n; ++i)
                ++c[static_cast<int>(matrix.at(i, j))];
            w.row({matrix.list_ids[j], fmt_int(c[0]), fmt_int(c[1]), fmt_int(c[2]),
                   fmt_int(c[3]), fmt_int(c[4])});
        }
        w.close();
    }

    std::vector<double> part, att, abst;
    for (const auto& s : ds.per_legislator) {
        part.push_back(s.participation_pct);
        if (s.attendance_defined) att.push_back(s.attendance_pct);
        if (s.abstention_defined) abst.push_back(s.abstention_pct);
    }
    write_histogram_svg(rc.out + "/participation_hist.svg", part, 25,
                        "Participation across legislators", "% of vote lists");
    write_histogram_svg(rc.out + "/attendance_hist.svg", att, 25,
                        "Attendance across legislators", "% of listed votes");
    write_histogram_svg(rc.out + "/abstention_hist.svg", abst, 25,
                        "Abstention across legislators", "% of cast votes");
    write_box_svg(rc.out + "/participation_by_party.svg", metric_boxes(ds.by_party, 0),
                  "Participation by party", "%");
    write_box_svg(rc.out + "/attendance_by_party.svg", metric_boxes(ds.by_party, 1),
                  "Attendance by party", "%");
    write_box_svg(rc.out + "/abstention_by_party.svg", metric_boxes(ds.by_party, 2),
                  "Abstention by party", "%");
    write_box_svg(rc.out + "/participation_by_attribute.svg", metric_boxes(by_attr, 0),
                  "Participation by attribute flag", "%");
    write_box_svg(rc.out + "/attendance_by_attribute.svg", metric_boxes(by_attr, 1),
                  "Attendance by attribute flag", "%");
    write_box_svg(rc.out + "/abstention_by_attribute.svg", metric_boxes(by_attr, 2),
                  "Abstention by attribute flag", "%");

    std::map<std::string, std::string> man;
    man["command"] = "describe";
    man["votes"] = rc.votes;
    man["meta"] = rc.meta;
    man["n_legislators"] = std::to_string(matrix.n);
    man["m_lists"] = std::to_string(matrix.m);
    write_keyval(rc.out + "/manifest.txt", man);
    std::cout << "describe: " << matrix.n << " legislators, " << matrix.m
              << " vote lists -> " << rc.out << "\n";
    return 0;
}

int cmd_fit(const RunConfig& rc) {
    if (rc.votes.empty() || rc.meta.empty())
        throw ValidationError("fit needs --votes and --meta");
    auto [matrix, roster] =
        parse_rollcall(rc.votes, rc.meta, TokenMap::defaults(), rc.attribute_column);
    apply_anchors(roster, rc.anchor1, rc.anchor2);

    const FilterResult fr = filter_for_model(matrix, roster);

    // anchors must survive filtering; report the missing id if not
    {
        std::size_t anchored = 0;
        for (const auto& lm : fr.roster)
            if (lm.anchor) ++anchored;
        if (anchored != 2) {
            std::string missing;
            for (const auto& lm : roster)
                if (lm.anchor) {
                    bool kept = false;
                    for (const auto& k : fr.roster)
                        if (k.id == lm.id) kept = true;
                    if (!kept) missing += (missing.empty() ? "" : ", ") + lm.id;
                }
            throw ValidationError(
                anchored < 2
                    ? "anchor legislator(s) dropped by filtering (no recorded votes): " +
                          missing
                    : "expected exactly 2 anchors after filtering");
        }
    }

    const ModelView view = encode_for_model(fr.matrix);
    const PriorSpec priors = prior_spec(rc);
    const McmcConfig mc = mcmc_config(rc);
    const Link link = parse_link(rc.link);

    const auto t0 = std::chrono::steady_clock::now();
    const PosteriorDraws draws = run(mc, view, fr.roster, priors, link);
    const auto t1 = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(t1 - t0).count();

    ensure_outdir(rc.out);
    write_draws(rc.out, draws);
    write_meta_csv(rc.out + "/roster.csv", fr.roster);

    DiagnosticsReport diag = summarize_diagnostics(draws);
    if (!diag.warning.empty()) std::cerr << "warning: " << diag.warning << "\n";
    write_diagnostics_csv(rc.out + "/diagnostics.csv", diag);

    std::vector<double> rhats, msds, esss, cvs;
    for (const auto& pd : diag.params) {
        if (pd.rhat_defined) rhats.push_back(pd.rhat);
        if (pd.ess_defined) {
            msds.push_back(pd.mcse_over_sd);
            esss.push_back(pd.ess_over_s);
        }
        if (pd.cv_defined) cvs.push_back(pd.cv_pct);
    }
    write_hist_panel_svg(rc.out + "/diagnostics_panel.svg",
                         {{"split R-hat", rhats},
                          {"MCSE / SD", msds},
                          {"ESS / total draws", esss},
                          {"CV of estimate (%)", cvs}},
                         "Convergence diagnostics");
    write_trace_svg(rc.out + "/lp_trace.svg", diag.lp_trace, "Log-posterior trace", "lp");

    auto man = manifest_entries(draws);
    man["command"] = "fit";
    man["votes"] = rc.votes;
    man["meta"] = rc.meta;
    man["attribute_column"] = rc.attribute_column;
    std::string dropped;
    for (const auto& id : fr.dropped_ids) dropped += (dropped.empty() ? "" : ",") + id;
    man["dropped_ids"] = dropped;
    man["n_dropped"] = std::to_string(fr.dropped_ids.size());
    man["n_obs_cells"] = std::to_string(view.n_obs);
    if (!diag.warning.empty()) man["warning"] = diag.warning;
    man["wall_seconds"] = fmt_num(wall);
    write_keyval(rc.out + "/manifest.txt", man);

    std::cout << "fit: " << draws.config.chains << " chains x " << draws.retained
              << " retained draws over " << draws.p_dim() << " parameters -> " << rc.out
              << "\n";
    return 0;
}

// draws + roster echo from a previous fit
std::pair<PosteriorDraws, Roster> load_run(const std::string& dir) {
    if (dir.empty()) throw ValidationError("missing run directory (--run)");
    PosteriorDraws draws = read_draws(dir);
    Roster roster = read_meta_csv(dir + "/roster.csv");
    return {std::move(draws), std::move(roster)};
}

int cmd_summarize(const RunConfig& rc) {
    auto [draws, roster] = load_run(rc.run);
    const PosteriorSummary sum = summarize(draws, roster, rc.ci_level);
    ensure_outdir(rc.out);
    write_summary_csv(rc.out + "/summary_items.csv", rc.out + "/summary_betas.csv", sum);

    const GroupTable gt = group_table(sum, roster);
    write_group_csv(rc.out + "/groups_party.csv", gt.by_party);
    write_group_csv(rc.out + "/groups_bloc.csv", gt.by_bloc);

    // caterpillar sorted by posterior mean, colored by bloc
    std::vector<std::size_t> order(sum.betas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sum.betas[a].mean < sum.betas[b].mean;
    });
    const std::map<Bloc, std::string> bloc_color = {
        {Bloc::Coalition, "#1f77b4"},
        {Bloc::Opposition, "#d62728"},
        {Bloc::Independent, "#2ca02c"},
        {Bloc::Minority, "#ff7f0e"}};
    std::vector<CaterpillarEntry> entries;
    for (std::size_t k : order) {
        CaterpillarEntry e;
        e.label = sum.betas[k].id;
        e.lo = sum.betas[k].anchored ? sum.betas[k].mean : sum.betas[k].ci_low;
        e.hi = sum.betas[k].anchored ? sum.betas[k].mean : sum.betas[k].ci_high;
        e.mid = sum.betas[k].mean;
        e.color = bloc_color.at(roster[k].bloc);
        entries.push_back(e);
    }
    write_caterpillar_svg(rc.out + "/caterpillar.svg", entries,
                          "Ideal points with credible intervals", "ideal point");

    // marginal densities on request
    if (!rc.density_ids.empty()) {
        std::map<std::string, std::size_t> beta_col;
        for (std::size_t k = 0; k < draws.param_names.size(); ++k)
            if (draws.param_names[k].rfind("beta_", 0) == 0)
                beta_col[draws.param_names[k].substr(5)] = k;
        for (const auto& id : split_list(rc.density_ids, ',')) {
            auto it = beta_col.find(id);
            if (it == beta_col.end())
                throw ValidationError("density requested for unknown or anchored id '" +
                                      id + "'");
            write_density_svg(rc.out + "/density_" + id + ".svg", draws.pooled(it->second),
                              "Posterior density: " + id, "ideal point");
        }
    }

    std::map<std::string, std::string> man;
    man["command"] = "summarize";
    man["run"] = rc.run;
    man["ci_level"] = fmt_num(rc.ci_level);
    write_keyval(rc.out + "/manifest.txt", man);

    std::size_t sig = 0;
    for (const auto& s : sum.betas)
        if (s.significant) ++sig;
    std::cout << "summarize: " << sum.betas.size() << " legislators, " << sig
              << " significantly nonzero at level " << rc.ci_level << " -> " << rc.out
              << "\n";
    return 0;
}

int cmd_probs(const RunConfig& rc) {
    auto [draws, roster] = load_run(rc.run);
    const auto regions = parse_regions(rc.regions);
    ensure_outdir(rc.out);

    std::map<std::string, std::size_t> beta_col;
    for (std::size_t k = 0; k < draws.param_names.size(); ++k)
        if (draws.param_names[k].rfind("beta_", 0) == 0)
            beta_col[draws.param_names[k].substr(5)] = k;

    CsvWriter w(rc.out + "/region_probs.csv");
    std::vector<std::string> head{"id", "mean"};
    for (const auto& r : regions) head.push_back(r.label);
    w.row(head);
    for (const auto& lm : roster) {
        std::vector<std::string> row{lm.id};
        auto it = beta_col.find(lm.id);
        if (it != beta_col.end()) {
            const std::vector<double> d = draws.pooled(it->second);
            row.push_back(fmt_num(mean_of(d)));
            for (const auto& r : regions) row.push_back(fmt_num(region_prob(d, r.lo, r.hi)));
        } else if (lm.anchor) {
            row.push_back(fmt_num(*lm.anchor));
            for (const auto& r : regions)
                row.push_back(fmt_num((*lm.anchor > r.lo && *lm.anchor <= r.hi) ? 1.0 : 0.0));
        } else {
            throw ValidationError("legislator '" + lm.id + "' has no draws and no anchor");
        }
        w.row(row);
    }
    w.close();

    std::map<std::string, std::string> man;
    man["command"] = "probs";
    man["run"] = rc.run;
    man["regions"] = rc.regions;
    write_keyval(rc.out + "/manifest.txt", man);
    std::cout << "probs: " << roster.size() << " legislators x " << regions.size()
              << " regions -> " << rc.out << "\n";
    return 0;
}

int cmd_compare(const RunConfig& rc) {
    if (rc.run_a.empty() || rc.run_b.empty())
        throw ValidationError("compare needs --run-a and --run-b");
    auto [draws_a, roster_a] = load_run(rc.run_a);
    auto [draws_b, roster_b] = load_run(rc.run_b);
    const PosteriorSummary sa = summarize(draws_a, roster_a, rc.ci_level);
    const PosteriorSummary sb = summarize(draws_b, roster_b, rc.ci_level);
    const RunComparison cmp = compare_runs(sa, sb);

    ensure_outdir(rc.out);
    {
        CsvWriter w(rc.out + "/compare.csv");
        w.row({"id", "mean_a", "mean_b"});
        for (std::size_t i = 0; i < cmp.ids.size(); ++i)
            w.row({cmp.ids[i], fmt_num(cmp.mean_a[i]), fmt_num(cmp.mean_b[i])});
        w.close();
    }
    write_scatter_svg(rc.out + "/compare_scatter.svg", cmp.mean_a, cmp.mean_b,
                      "Ideal points: run A vs run B", "run A", "run B", true);
    std::map<std::string, std::string> man;
    man["command"] = "compare";
    man["run_a"] = rc.run_a;
    man["run_b"] = rc.run_b;
    man["spearman"] = fmt_num(cmp.spearman);
    man["n"] = std::to_string(cmp.ids.size());
    write_keyval(rc.out + "/manifest.txt", man);
    std::cout << "compare: spearman = " << fmt_num(cmp.spearman) << " over "
              << cmp.ids.size() << " legislators -> " << rc.out << "\n";
    return 0;
}

int cmd_logit(const RunConfig& rc) {
    auto [draws, roster] = load_run(rc.run);
    const PosteriorSummary sum = summarize(draws, roster, rc.ci_level);

    LogisticData data;
    for (std::size_t i = 0; i < roster.size(); ++i) {
        data.x.push_back(sum.betas[i].mean);
        data.y.push_back(roster[i].attribute_flag ? 1 : 0);
    }
    if (data.size() < 10)
        throw ValidationError("logistic analysis needs >= 10 legislators, got " +
                              std::to_string(data.size()));

    const LogisticFit fit = fit_mle(data);
    const LrtResult lrt = lrt_chisq(fit);
    const OddsRatios ors = odds_ratio(fit);
    const RocResult roc = roc_auc(fit);
    const BoxTidwellResult bt = box_tidwell(data);
    const CooksResult cooks = cooks_distance(fit);

    BayesLogisticConfig bc;
    bc.prior_sd = rc.bayes_prior_sd;
    bc.iterations = rc.bayes_iterations;
    bc.warmup = rc.bayes_warmup;
    bc.chains = rc.bayes_chains;
    bc.seed = rc.seed;
    const BayesLogisticFit bayes = fit_bayes(data, bc);

    ensure_outdir(rc.out);
    std::map<std::string, std::string> rep;
    rep["n"] = std::to_string(data.size());
    rep["estimate_intercept"] = fmt_num(fit.beta0);
    rep["estimate_x"] = fmt_num(fit.beta1);
    rep["se_intercept"] = fmt_num(fit.se0);
    rep["se_x"] = fmt_num(fit.se1);
    rep["z_intercept"] = fmt_num(fit.z0);
    rep["z_x"] = fmt_num(fit.z1);
    rep["p_intercept"] = fmt_num(fit.p0);
    rep["p_x"] = fmt_num(fit.p1);
    rep["null_deviance"] = fmt_num(fit.null_deviance);
    rep["residual_deviance"] = fmt_num(fit.residual_deviance);
    rep["aic"] = fmt_num(fit.aic);
    rep["converged"] = fit.converged ? "1" : "0";
    rep["iterations"] = std::to_string(fit.iterations);
    rep["lrt_statistic"] = fmt_num(lrt.statistic);
    rep["lrt_df"] = std::to_string(lrt.df);
    rep["lrt_p"] = fmt_num(lrt.p);
    rep["odds_ratio_intercept"] = fmt_num(ors.intercept);
    rep["odds_ratio_x"] = fmt_num(ors.slope);
    rep["auc"] = fmt_num(roc.auc);
    rep["box_tidwell_statistic"] = fmt_num(bt.statistic);
    rep["box_tidwell_p"] = fmt_num(bt.p);
    rep["cooks_threshold"] = fmt_num(cooks.threshold);
    std::size_t n_inf = 0;
    for (bool f : cooks.influential)
        if (f) ++n_inf;
    rep["cooks_influential"] = std::to_string(n_inf);
    rep["bayes_prior_sd"] = fmt_num(rc.bayes_prior_sd);
    auto bayes_block = [&rep](const std::string& pre, const BayesParamSummary& s) {
        rep["bayes_" + pre + "_mean"] = fmt_num(s.mean);
        rep["bayes_" + pre + "_sd"] = fmt_num(s.sd);
        rep["bayes_" + pre + "_p10"] = fmt_num(s.p10);
        rep["bayes_" + pre + "_p50"] = fmt_num(s.p50);
        rep["bayes_" + pre + "_p90"] = fmt_num(s.p90);
        rep["bayes_" + pre + "_mcse"] = fmt_num(s.mcse);
        rep["bayes_" + pre + "_rhat"] = fmt_num(s.rhat);
        rep["bayes_" + pre + "_n_eff"] = fmt_num(s.n_eff);
    };
    bayes_block("intercept", bayes.beta0);
    bayes_block("x", bayes.beta1);
    rep["bayes_accept_rate"] = fmt_num(bayes.accept_rate);
    write_keyval(rc.out + "/logit_report.txt", rep);

    {
        CsvWriter w(rc.out + "/roc.csv");
        w.row({"fpr", "tpr"});
        for (const auto& [fpr, tpr] : roc.points) w.row({fmt_num(fpr), fmt_num(tpr)});
        w.close();
    }
    {
        CsvWriter w(rc.out + "/cooks.csv");
        w.row({"id", "x", "y", "fitted", "cooks_d", "influential"});
        for (std::size_t i = 0; i < data.size(); ++i)
            w.row({roster[i].id, fmt_num(data.x[i]), fmt_int(data.y[i]),
                   fmt_num(fit.fitted[i]), fmt_num(cooks.d[i]),
                   cooks.influential[i] ? "1" : "0"});
        w.close();
    }
    write_roc_svg(rc.out + "/roc.svg", roc.points, roc.auc);
    write_cooks_svg(rc.out + "/cooks.svg", cooks.d, cooks.threshold);

    std::map<std::string, std::string> man;
    man["command"] = "logit";
    man["run"] = rc.run;
    man["seed"] = std::to_string(rc.seed);
    write_keyval(rc.out + "/manifest.txt", man);
    std::cout << "logit: slope " << fmt_num(fit.beta1) << " (p = " << fmt_num(fit.p1)
              << "), AUC " << fmt_num(roc.auc) << " -> " << rc.out << "\n";
    return 0;
}

int cmd_simulate(const RunConfig& rc) {
    SyntheticSpec spec;
    spec.n = static_cast<std::size_t>(rc.sim_n);
    spec.m = static_cast<std::size_t>(rc.sim_m);
    spec.missing_rate = rc.sim_missing;
    spec.beta_sd = rc.sim_beta_sd;
    spec.mu_sd = rc.sim_mu_sd;
    spec.alpha_sd = rc.sim_alpha_sd;
    spec.attr_intercept = rc.sim_attr_intercept;
    spec.attr_slope = rc.sim_attr_slope;
    spec.link = parse_link(rc.link);
    spec.seed = rc.seed;

    const SyntheticInstance inst = generate(spec);
    ensure_outdir(rc.out);
    write_votes_csv(rc.out + "/votes.csv", inst.matrix);
    write_meta_csv(rc.out + "/meta.csv", inst.roster);
    write_truth_csv(rc.out + "/truth.csv", inst);

    std::map<std::string, std::string> man;
    man["command"] = "simulate";
    man["n"] = std::to_string(spec.n);
    man["m"] = std::to_string(spec.m);
    man["missing_rate"] = fmt_num(spec.missing_rate);
    man["beta_sd"] = fmt_num(spec.beta_sd);
    man["mu_sd"] = fmt_num(spec.mu_sd);
    man["alpha_sd"] = fmt_num(spec.alpha_sd);
    man["attr_intercept"] = fmt_num(spec.attr_intercept);
    man["attr_slope"] = fmt_num(spec.attr_slope);
    man["link"] = link_name(spec.link);
    man["seed"] = std::to_string(spec.seed);

    if (!rc.rates.empty()) {
        std::vector<double> rates;
        for (const auto& tok : split_list(rc.rates, ',')) rates.push_back(parse_bound(tok));
        McmcConfig mc;
        mc.iterations = rc.sens_iterations;
        mc.warmup = rc.sens_warmup;
        mc.thin = rc.sens_thin;
        mc.chains = rc.sens_chains;
        mc.seed = rc.seed;
        mc.init_rule = parse_init_rule(rc.init_rule);
        mc.adapt_window = rc.adapt_window;
        const auto rows = missing_sensitivity(spec, rates, mc, prior_spec(rc));
        CsvWriter w(rc.out + "/sensitivity.csv");
        w.row({"extra_rate", "retained_legislators", "pearson_vs_base", "spearman_vs_base",
               "pearson_vs_truth", "spearman_vs_truth"});
        for (const auto& r : rows)
            w.row({fmt_num(r.extra_rate), fmt_int((long long)r.retained_legislators),
                   fmt_num(r.pearson_vs_base), fmt_num(r.spearman_vs_base),
                   fmt_num(r.pearson_vs_truth), fmt_num(r.spearman_vs_truth)});
        w.close();
        man["rates"] = rc.rates;
    }
    write_keyval(rc.out + "/manifest.txt", man);
    std::cout << "simulate: n=" << spec.n << " m=" << spec.m << " seed=" << spec.seed
              << " -> " << rc.out << "\n";
    return 0;
}

int cmd_oracle(const RunConfig& rc) {
    if (rc.votes.empty() || rc.meta.empty())
        throw ValidationError("oracle needs --votes and --meta");
    auto [matrix, roster] =
        parse_rollcall(rc.votes, rc.meta, TokenMap::defaults(), rc.attribute_column);
    apply_anchors(roster, rc.anchor1, rc.anchor2);
    const ModelView view = encode_for_model(matrix);
    const QuadratureResult q =
        quadrature_posterior(view, roster, prior_spec(rc), parse_link(rc.link),
                             rc.oracle_grid, rc.oracle_lo, rc.oracle_hi);
    ensure_outdir(rc.out);
    {
        CsvWriter w(rc.out + "/oracle_moments.csv");
        w.row({"param", "mean", "sd"});
        for (std::size_t k = 0; k < q.names.size(); ++k)
            w.row({q.names[k], fmt_num(q.mean[k]), fmt_num(q.sd[k])});
        w.close();
    }
    std::map<std::string, std::string> man;
    man["command"] = "oracle";
    man["votes"] = rc.votes;
    man["meta"] = rc.meta;
    man["grid_points"] = std::to_string(q.grid_points);
    man["lo"] = fmt_num(q.lo);
    man["hi"] = fmt_num(q.hi);
    man["link"] = rc.link;
    man["alpha0"] = fmt_num(rc.alpha0);
    man["A0"] = fmt_num(rc.A0);
    man["b"] = fmt_num(rc.b);
    man["B"] = fmt_num(rc.B);
    write_keyval(rc.out + "/manifest.txt", man);
    std::cout << "oracle: " << q.names.size() << " free parameters on a " << q.grid_points
              << "-point grid -> " << rc.out << "\n";
    return 0;
}

void add_common_data_opts(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--votes", rc.votes, "votes CSV (id + one column per vote list)");
    sub->add_option("--meta", rc.meta, "roster CSV (id,name,party,bloc,attribute,anchor)");
    sub->add_option("--attribute-column", rc.attribute_column,
                    "roster column holding the binary attribute");
}

void add_model_opts(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--alpha0", rc.alpha0, "prior mean of item parameters");
    sub->add_option("--A0", rc.A0, "prior variance of item parameters");
    sub->add_option("--b", rc.b, "prior mean of ideal points");
    sub->add_option("--B", rc.B, "prior variance of ideal points");
    sub->add_option("--anchor1", rc.anchor1, "first anchor as ID or ID:PIN (default pin -1)");
    sub->add_option("--anchor2", rc.anchor2, "second anchor as ID or ID:PIN (default pin 1)");
}

void add_mcmc_opts(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--iterations", rc.iterations, "MCMC iterations per chain");
    sub->add_option("--warmup", rc.warmup, "warmup iterations discarded");
    sub->add_option("--thin", rc.thin, "keep one draw per this many iterations");
    sub->add_option("--chains", rc.chains, "number of independent chains");
    sub->add_option("--init", rc.init_rule, "init rule: bloc_signs, prior_draw, zeros");
    sub->add_option("--adapt-window", rc.adapt_window, "proposal adaptation batch size");
}

}  // namespace

int cli_main(int argc, char** argv) {
    RunConfig rc;

    try {
        // config file values load first; command-line flags then override
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) rc.config_path = argv[i + 1];
            else if (arg.rfind("--config=", 0) == 0) rc.config_path = arg.substr(9);
        }
        if (!rc.config_path.empty()) apply_config_file(rc, rc.config_path);

        CLI::App app{"Bayesian ideal-point estimation from legislative roll-call votes"};
        app.require_subcommand(1);
        app.fallthrough();  // let --seed/--out/--link appear after the subcommand
        app.add_option("--config", rc.config_path, "key=value config file");
        app.add_option("--seed", rc.seed, "RNG seed");
        app.add_option("--out", rc.out, "output directory");
        app.add_option("--link", rc.link, "link function: logit or probit");

        auto* describe = app.add_subcommand("describe", "descriptive vote statistics");
        add_common_data_opts(describe, rc);

        auto* fit = app.add_subcommand("fit", "run the MCMC sampler");
        add_common_data_opts(fit, rc);
        add_model_opts(fit, rc);
        add_mcmc_opts(fit, rc);

        auto* summarize_cmd = app.add_subcommand("summarize", "posterior summaries");
        summarize_cmd->add_option("--run", rc.run, "fit output directory");
        summarize_cmd->add_option("--level", rc.ci_level, "credible level");
        summarize_cmd->add_option("--density-ids", rc.density_ids,
                                  "comma-separated ids for marginal density plots");

        auto* probs = app.add_subcommand("probs", "posterior region probabilities");
        probs->add_option("--run", rc.run, "fit output directory");
        probs->add_option("--regions", rc.regions,
                          "comma-separated lo:hi regions, inf allowed");

        auto* compare = app.add_subcommand("compare", "compare two fits");
        compare->add_option("--run-a", rc.run_a, "first fit directory");
        compare->add_option("--run-b", rc.run_b, "second fit directory");

        auto* logit_cmd = app.add_subcommand("logit", "attribute-on-ideal-point logistic");
        logit_cmd->add_option("--run", rc.run, "fit output directory");
        logit_cmd->add_option("--bayes-prior-sd", rc.bayes_prior_sd,
                              "prior SD for the Bayesian logistic fit");
        logit_cmd->add_option("--bayes-iterations", rc.bayes_iterations,
                              "Bayesian logistic iterations per chain");
        logit_cmd->add_option("--bayes-warmup", rc.bayes_warmup,
                              "Bayesian logistic warmup");
        logit_cmd->add_option("--bayes-chains", rc.bayes_chains,
                              "Bayesian logistic chains");

        auto* simulate = app.add_subcommand("simulate", "synthetic data and sensitivity");
        simulate->add_option("--n", rc.sim_n, "legislators");
        simulate->add_option("--m", rc.sim_m, "vote lists");
        simulate->add_option("--missing", rc.sim_missing, "base missing rate");
        simulate->add_option("--beta-sd", rc.sim_beta_sd, "true ideal point SD");
        simulate->add_option("--mu-sd", rc.sim_mu_sd, "true item intercept SD");
        simulate->add_option("--alpha-sd", rc.sim_alpha_sd, "true item slope SD");
        simulate->add_option("--attr-intercept", rc.sim_attr_intercept,
                             "attribute model intercept");
        simulate->add_option("--attr-slope", rc.sim_attr_slope, "attribute model slope");
        simulate->add_option("--rates", rc.rates,
                             "comma-separated extra missing rates for sensitivity");
        simulate->add_option("--sens-iterations", rc.sens_iterations,
                             "sensitivity refit iterations");
        simulate->add_option("--sens-warmup", rc.sens_warmup, "sensitivity refit warmup");
        simulate->add_option("--sens-thin", rc.sens_thin, "sensitivity refit thinning");
        simulate->add_option("--sens-chains", rc.sens_chains, "sensitivity refit chains");
        add_model_opts(simulate, rc);

        auto* oracle = app.add_subcommand("oracle", "dense-grid posterior moments");
        add_common_data_opts(oracle, rc);
        add_model_opts(oracle, rc);
        oracle->add_option("--grid", rc.oracle_grid, "grid points per axis");
        oracle->add_option("--lo", rc.oracle_lo, "grid lower bound");
        oracle->add_option("--hi", rc.oracle_hi, "grid upper bound");

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        if (describe->parsed()) return cmd_describe(rc);
        if (fit->parsed()) return cmd_fit(rc);
        if (summarize_cmd->parsed()) return cmd_summarize(rc);
        if (probs->parsed()) return cmd_probs(rc);
        if (compare->parsed()) return cmd_compare(rc);
        if (logit_cmd->parsed()) return cmd_logit(rc);
        if (simulate->parsed()) return cmd_simulate(rc);
        if (oracle->parsed()) return cmd_oracle(rc);
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace ideal
