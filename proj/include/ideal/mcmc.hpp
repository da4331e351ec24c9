// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ideal/rng.hpp"
#include "ideal/rollcall.hpp"
#include "ideal/spatial.hpp"

namespace ideal {

enum class InitRule { BlocSigns, PriorDraw, Zeros };

const char* init_rule_name(InitRule r);
InitRule parse_init_rule(const std::string& s);

struct McmcConfig {
    long long iterations = 80000;
    long long warmup = 16000;
    long long thin = 5;
    int chains = 4;
    std::uint64_t seed = 1;
    InitRule init_rule = InitRule::BlocSigns;
    long long adapt_window = 50;

    long long retained_per_chain() const { return (iterations - warmup) / thin; }
    void validate() const;
};

// Sparse index of observed cells, built once per fit.
struct ObsIndex {
    std::size_t n = 0, m = 0;
    // (row, y) pairs per column and (col, y) pairs per row
    std::vector<std::vector<std::pair<std::uint32_t, std::int8_t>>> by_col;
    std::vector<std::vector<std::pair<std::uint32_t, std::int8_t>>> by_row;

    static ObsIndex build(const ModelView& view);
};

// Everything one chain mutates while sampling.
struct LatentState {
    ItemParams items;
    IdealPoints points;
    std::vector<double> ystar;       // probit latent utilities, n*m, row-major
    std::vector<double> item_scale;  // per (mu, alpha) block proposal scale
    std::vector<double> beta_scale;  // per free-beta proposal scale
    std::vector<std::uint32_t> item_accept, item_tries;
    std::vector<std::uint32_t> beta_accept, beta_tries;
};

LatentState init_state(const McmcConfig& config, const Roster& roster,
                       const PriorSpec& priors, std::size_t m, Rng& rng);

void step_probit_gibbs(LatentState& state, const ObsIndex& idx, const PriorSpec& priors,
                       Rng& rng);

// One Metropolis-within-Gibbs sweep; when adapting=true the per-window
// acceptance counters keep accumulating for the next scale update.
void step_logit_mh(LatentState& state, const ObsIndex& idx, const PriorSpec& priors,
                   Rng& rng);

// Batch scale update toward the 0.3-0.5 acceptance band; clamped below.
void adapt_scales(LatentState& state);

struct ChainReport {
    double item_accept_rate = 0.0;  // post-warmup, logit kernel only
    double beta_accept_rate = 0.0;
    double mean_item_scale = 0.0;
    double mean_beta_scale = 0.0;
};

struct PosteriorDraws {
    std::size_t m = 0;                     // vote lists
    std::size_t n = 0;                     // legislators (incl. anchors)
    std::vector<std::string> param_names;  // P columns: mu_*, alpha_*, beta_<id>
    std::vector<std::size_t> free_rows;    // roster row per beta column
    long long retained = 0;                // draws per chain
    std::vector<std::vector<double>> chain_draws;  // per chain, retained x P row-major
    std::vector<std::vector<double>> chain_lp;     // per chain, retained
    std::vector<ChainReport> reports;
    McmcConfig config;
    Link link = Link::Logit;
    PriorSpec priors;

    std::size_t p_dim() const { return param_names.size(); }
    // Copy of one parameter's draws from one chain.
    std::vector<double> column(std::size_t chain, std::size_t param) const;
    // All chains concatenated in chain order.
    std::vector<double> pooled(std::size_t param) const;

    std::size_t mu_col(std::size_t j) const { return j; }
    std::size_t alpha_col(std::size_t j) const { return m + j; }
    std::size_t beta_col(std::size_t k) const { return 2 * m + k; }
};

PosteriorDraws run(const McmcConfig& config, const ModelView& view, const Roster& roster,
                   const PriorSpec& priors, Link link);

// One CSV per chain (param columns plus lp), plus key-value manifest entries.
void write_draws(const std::string& dir, const PosteriorDraws& draws);
PosteriorDraws read_draws(const std::string& dir);

std::map<std::string, std::string> manifest_entries(const PosteriorDraws& draws);

}  // namespace ideal
