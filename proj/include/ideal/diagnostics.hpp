// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <vector>

#include "ideal/mcmc.hpp"

namespace ideal {

// Split-chain potential scale reduction. Each input chain is halved; B and
// W are computed over the resulting half-chains.
struct RhatResult {
    double value = 0.0;
    bool degenerate = false;  // zero within-chain variance (constants, anchors)
};

RhatResult split_rhat(const std::vector<std::vector<double>>& chains);

// Effective sample size via the initial-positive-sequence truncation of the
// combined-chain autocorrelation estimate; capped at the total draw count.
struct EssResult {
    double value = 0.0;
    bool degenerate = false;
};

EssResult ess(const std::vector<std::vector<double>>& chains);

struct ParamDiag {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    bool rhat_defined = false;
    double rhat = 0.0;
    bool ess_defined = false;
    double ess = 0.0;
    double mcse = 0.0;
    double mcse_over_sd = 0.0;
    double ess_over_s = 0.0;  // ess / total retained draws
    bool cv_defined = false;
    double cv_pct = 0.0;
};

struct DiagnosticsReport {
    std::vector<ParamDiag> params;                // one row per free parameter, plus lp
    std::vector<std::vector<double>> lp_trace;    // per chain
    std::string warning;                          // e.g. single-chain R-hat caveat
};

DiagnosticsReport summarize_diagnostics(const PosteriorDraws& draws);

void write_diagnostics_csv(const std::string& path, const DiagnosticsReport& report);

}  // namespace ideal
