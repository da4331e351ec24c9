// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <vector>

#include "ideal/mcmc.hpp"

namespace ideal {

struct ParamSummary {
    std::string name;
    double mean = 0.0, sd = 0.0, median = 0.0, ci_low = 0.0, ci_high = 0.0;
};

struct BetaSummary {
    std::string id;
    bool anchored = false;
    double mean = 0.0, sd = 0.0, median = 0.0;
    // CI fields are meaningless for anchors (point masses) and left at the pin
    double ci_low = 0.0, ci_high = 0.0;
    bool significant = false;  // CI excludes 0; always false for anchors
};

struct PosteriorSummary {
    double level = 0.95;
    std::vector<ParamSummary> items;  // mu_* then alpha_* rows
    std::vector<BetaSummary> betas;   // roster order, anchors included
};

// Percentile summaries of pooled draws; anchors come back as point masses.
PosteriorSummary summarize(const PosteriorDraws& draws, const Roster& roster, double level);

// Fraction of draws in the half-open interval (lo, hi]; +-inf accepted, so
// half-open regions partition the line and their probabilities sum to 1.
double region_prob(const std::vector<double>& draws, double lo, double hi);

struct GroupRow {
    std::string group;
    std::size_t members = 0;
    double min = 0.0, max = 0.0;
    bool cv_defined = false;  // needs >= 2 members and nonzero mean
    double cv_pct = 0.0;
};

struct GroupTable {
    std::vector<GroupRow> by_party;
    std::vector<GroupRow> by_bloc;
};

GroupTable group_table(const PosteriorSummary& summary, const Roster& roster);

struct RunComparison {
    double spearman = 0.0;
    std::vector<std::string> ids;
    std::vector<double> mean_a, mean_b;
};

// Pairs legislators by id; throws listing the difference when the sets differ.
RunComparison compare_runs(const PosteriorSummary& a, const PosteriorSummary& b);

void write_summary_csv(const std::string& items_path, const std::string& betas_path,
                       const PosteriorSummary& summary);
void write_group_csv(const std::string& path, const std::vector<GroupRow>& rows);

}  // namespace ideal
