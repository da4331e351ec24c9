// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ideal/csv.hpp"
#include "ideal/errors.hpp"
#include "ideal/mathutil.hpp"

namespace ideal {

namespace {

ParamSummary summarize_column(const std::string& name, std::vector<double> draws,
                              double level) {
    ParamSummary s;
    s.name = name;
    s.mean = mean_of(draws);
    s.sd = sample_sd(draws);
    std::sort(draws.begin(), draws.end());
    const double tail = 0.5 * (1.0 - level);
    s.median = quantile_sorted(draws, 0.5);
    s.ci_low = quantile_sorted(draws, tail);
    s.ci_high = quantile_sorted(draws, 1.0 - tail);
    return s;
}

}  // namespace

PosteriorSummary summarize(const PosteriorDraws& draws, const Roster& roster, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw ValidationError("credible level must be in (0, 1)");
    PosteriorSummary out;
    out.level = level;

    std::map<std::string, std::size_t> beta_cols;
    for (std::size_t k = 0; k < draws.param_names.size(); ++k) {
        const std::string& nm = draws.param_names[k];
        if (nm.rfind("beta_", 0) == 0) {
            beta_cols[nm.substr(5)] = k;
        } else {
            out.items.push_back(summarize_column(nm, draws.pooled(k), level));
        }
    }

    for (const auto& lm : roster) {
        auto it = beta_cols.find(lm.id);
        if (it != beta_cols.end()) {
            const ParamSummary ps = summarize_column(lm.id, draws.pooled(it->second), level);
            BetaSummary bs;
            bs.id = lm.id;
            bs.mean = ps.mean;
            bs.sd = ps.sd;
            bs.median = ps.median;
            bs.ci_low = ps.ci_low;
            bs.ci_high = ps.ci_high;
            bs.significant = ps.ci_low > 0.0 || ps.ci_high < 0.0;
            out.betas.push_back(bs);
        } else if (lm.anchor) {
            BetaSummary bs;
            bs.id = lm.id;
            bs.anchored = true;
            bs.mean = bs.median = bs.ci_low = bs.ci_high = *lm.anchor;
            bs.sd = 0.0;
            out.betas.push_back(bs);
        } else {
            throw ValidationError("legislator '" + lm.id +
                                  "' has no draw column and no anchor pin");
        }
    }
    return out;
}

double region_prob(const std::vector<double>& draws, double lo, double hi) {
    if (draws.empty()) throw ValidationError("region_prob: no draws");
    std::size_t c = 0;
    for (double d : draws)
        if (d > lo && d <= hi) ++c;
    return static_cast<double>(c) / static_cast<double>(draws.size());
}

namespace {

std::vector<GroupRow> group_rows(const std::vector<double>& means,
                                 const std::vector<std::string>& labels) {
    std::map<std::string, std::vector<double>> by;
    for (std::size_t i = 0; i < means.size(); ++i) by[labels[i]].push_back(means[i]);
    std::vector<GroupRow> rows;
    for (const auto& [g, v] : by) {
        GroupRow r;
        r.group = g;
        r.members = v.size();
        r.min = *std::min_element(v.begin(), v.end());
        r.max = *std::max_element(v.begin(), v.end());
        if (v.size() >= 2) {
            const double mu = mean_of(v);
            if (std::fabs(mu) >= 1e-12) {
                r.cv_defined = true;
                r.cv_pct = 100.0 * sample_sd(v) / std::fabs(mu);
            }
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

GroupTable group_table(const PosteriorSummary& summary, const Roster& roster) {
    if (summary.betas.size() != roster.size())
        throw ValidationError("summary and roster disagree on legislator count");
    std::vector<double> means;
    std::vector<std::string> parties, blocs;
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (summary.betas[i].id != roster[i].id)
            throw ValidationError("summary and roster row order disagree at '" +
                                  roster[i].id + "'");
        means.push_back(summary.betas[i].mean);
        parties.push_back(roster[i].party);
        blocs.push_back(bloc_name(roster[i].bloc));
    }
    GroupTable t;
    t.by_party = group_rows(means, parties);
    t.by_bloc = group_rows(means, blocs);
    return t;
}

RunComparison compare_runs(const PosteriorSummary& a, const PosteriorSummary& b) {
    std::map<std::string, double> mb;
    for (const auto& s : b.betas) mb[s.id] = s.mean;

    std::set<std::string> only_a, only_b;
    for (const auto& s : a.betas)
        if (!mb.count(s.id)) only_a.insert(s.id);
    {
        std::set<std::string> ida;
        for (const auto& s : a.betas) ida.insert(s.id);
        for (const auto& s : b.betas)
            if (!ida.count(s.id)) only_b.insert(s.id);
    }
    if (!only_a.empty() || !only_b.empty()) {
        std::string msg = "legislator sets differ;";
        if (!only_a.empty()) {
            msg += " only in A:";
            for (const auto& id : only_a) msg += " " + id;
        }
        if (!only_b.empty()) {
            msg += " only in B:";
            for (const auto& id : only_b) msg += " " + id;
        }
        throw ValidationError(msg);
    }

    RunComparison cmp;
    for (const auto& s : a.betas) {
        cmp.ids.push_back(s.id);
        cmp.mean_a.push_back(s.mean);
        cmp.mean_b.push_back(mb.at(s.id));
    }
    cmp.spearman = spearman(cmp.mean_a, cmp.mean_b);
    return cmp;
}

void write_summary_csv(const std::string& items_path, const std::string& betas_path,
                       const PosteriorSummary& summary) {
    {
        CsvWriter w(items_path);
        w.row({"param", "mean", "sd", "median", "ci_low", "ci_high"});
        for (const auto& s : summary.items)
            w.row({s.name, fmt_num(s.mean), fmt_num(s.sd), fmt_num(s.median),
                   fmt_num(s.ci_low), fmt_num(s.ci_high)});
        w.close();
    }
    {
        CsvWriter w(betas_path);
        w.row({"id", "anchored", "mean", "sd", "median", "ci_low", "ci_high",
               "significant"});
        for (const auto& s : summary.betas) {
            if (s.anchored) {
                w.row({s.id, "1", fmt_num(s.mean), "0", fmt_num(s.median), "", "", "0"});
            } else {
                w.row({s.id, "0", fmt_num(s.mean), fmt_num(s.sd), fmt_num(s.median),
                       fmt_num(s.ci_low), fmt_num(s.ci_high), s.significant ? "1" : "0"});
            }
        }
        w.close();
    }
}

void write_group_csv(const std::string& path, const std::vector<GroupRow>& rows) {
    CsvWriter w(path);
    w.row({"group", "members", "min", "max", "cv_pct"});
    for (const auto& r : rows)
        w.row({r.group, fmt_int(static_cast<long long>(r.members)), fmt_num(r.min),
               fmt_num(r.max), r.cv_defined ? fmt_num(r.cv_pct) : "NA"});
    w.close();
}

}  // namespace ideal
