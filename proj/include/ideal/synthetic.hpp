// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ideal/mcmc.hpp"
#include "ideal/rollcall.hpp"
#include "ideal/spatial.hpp"

namespace ideal {

struct SyntheticSpec {
    std::size_t n = 40;
    std::size_t m = 120;
    double beta_mean = 0.0, beta_sd = 1.0;   // free-row truth
    double mu_mean = 0.0, mu_sd = 1.0;       // item intercept truth
    double alpha_mean = 0.0, alpha_sd = 1.0; // item slope truth
    double missing_rate = 0.2;
    Link link = Link::Logit;
    std::uint64_t seed = 1;
    // attribute flag planted via a logistic model on the true positions
    double attr_intercept = -1.0;
    double attr_slope = 0.8;

    void validate() const;
};

struct TruthRecord {
    std::vector<double> beta;   // per legislator (anchors at their pins)
    std::vector<double> mu;     // per vote list
    std::vector<double> alpha;  // per vote list
};

struct SyntheticInstance {
    VoteMatrix matrix;
    Roster roster;
    TruthRecord truth;
};

// Rows 1 and 2 are the designated anchors at -1 and +1. Cells are Bernoulli
// in G(mu + alpha*beta); masked cells land on Abstain/Absent/NotListed.
SyntheticInstance generate(const SyntheticSpec& spec);

void write_truth_csv(const std::string& path, const SyntheticInstance& inst);

// Frozen 3-legislator / 2-list instance used by the sampler oracle tests.
// Priors are deliberately narrow so the quadrature box holds the posterior.
SyntheticInstance tiny_instance();
PriorSpec tiny_instance_priors();

struct QuadratureResult {
    std::vector<std::string> names;  // mu_*, alpha_*, beta_<id> for free rows
    std::vector<double> mean;
    std::vector<double> sd;
    int grid_points = 0;
    double lo = 0.0, hi = 0.0;
};

// Dense tensor-grid posterior moments for instances with <= 5 free
// parameters. The grid sum is evaluated column-by-column (exact by
// distributivity of the factorized likelihood), so it is fast enough to
// re-run at doubled resolution as a self-check.
QuadratureResult quadrature_posterior(const ModelView& view, const Roster& roster,
                                      const PriorSpec& priors, Link link,
                                      int grid_points = 41, double lo = -6.0,
                                      double hi = 6.0);

struct SensitivityRow {
    double extra_rate = 0.0;
    std::size_t retained_legislators = 0;
    double pearson_vs_base = 0.0;
    double spearman_vs_base = 0.0;
    double pearson_vs_truth = 0.0;
    double spearman_vs_truth = 0.0;
};

// Refit after masking additional cells at each rate; correlations are over
// free legislators retained in both fits.
std::vector<SensitivityRow> missing_sensitivity(const SyntheticSpec& spec,
                                                const std::vector<double>& extra_rates,
                                                const McmcConfig& mcmc,
                                                const PriorSpec& priors);

}  // namespace ideal
