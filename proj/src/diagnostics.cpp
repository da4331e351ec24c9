// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ideal/csv.hpp"
#include "ideal/errors.hpp"
#include "ideal/mathutil.hpp"

namespace ideal {

namespace {

// Halve every chain, dropping the middle draw of odd-length chains.
std::vector<std::vector<double>> split_halves(const std::vector<std::vector<double>>& chains) {
    std::vector<std::vector<double>> halves;
    for (const auto& c : chains) {
        const std::size_t h = c.size() / 2;
        halves.emplace_back(c.begin(), c.begin() + h);
        halves.emplace_back(c.end() - h, c.end());
    }
    return halves;
}

struct VarDecomp {
    double w = 0.0;         // mean within-chain variance
    double var_plus = 0.0;  // (S-1)/S * W + B/S
    double s = 0.0;         // common chain length
    bool degenerate = false;
};

VarDecomp decompose(const std::vector<std::vector<double>>& chains) {
    VarDecomp d;
    const std::size_t m = chains.size();
    const std::size_t s = chains[0].size();
    d.s = static_cast<double>(s);

    // an exactly constant sequence still shows w ~ 1e-32 from summation
    // round-off, so detect constants by value, not by variance
    bool all_constant = true;
    for (const auto& c : chains)
        for (double x : c)
            if (x != chains[0][0]) {
                all_constant = false;
                break;
            }

    std::vector<double> means(m);
    double w = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        means[k] = mean_of(chains[k]);
        w += sample_var(chains[k]);
    }
    w /= static_cast<double>(m);
    d.w = w;
    if (all_constant || w <= 0.0) {
        d.degenerate = true;
        return d;
    }
    double b_over_s = 0.0;  // B/S = var of chain means
    if (m > 1) b_over_s = sample_var(means);
    d.var_plus = (d.s - 1.0) / d.s * w + b_over_s;
    return d;
}

// Lag-t autocovariance with divisor S (biased; keeps the sequence psd-ish).
double autocov(const std::vector<double>& x, double mean, std::size_t t) {
    const std::size_t s = x.size();
    double acc = 0.0;
    for (std::size_t i = 0; i + t < s; ++i) acc += (x[i] - mean) * (x[i + t] - mean);
    return acc / static_cast<double>(s);
}

}  // namespace

RhatResult split_rhat(const std::vector<std::vector<double>>& chains) {
    if (chains.empty()) throw ValidationError("split_rhat: no chains");
    const auto halves = split_halves(chains);
    for (const auto& h : halves)
        if (h.size() < 10)
            throw ValidationError("split_rhat: need >= 10 draws per half-chain");
    const std::size_t s0 = halves[0].size();
    for (const auto& h : halves)
        if (h.size() != s0) throw ValidationError("split_rhat: unequal chain lengths");

    const VarDecomp d = decompose(halves);
    if (d.degenerate) return {std::nan(""), true};
    return {std::sqrt(d.var_plus / d.w), false};
}

EssResult ess(const std::vector<std::vector<double>>& chains) {
    if (chains.empty()) throw ValidationError("ess: no chains");
    const std::size_t s = chains[0].size();
    for (const auto& c : chains)
        if (c.size() != s) throw ValidationError("ess: unequal chain lengths");
    if (s < 20) throw ValidationError("ess: need >= 20 draws per chain");

    const std::size_t m = chains.size();
    const double total = static_cast<double>(m) * static_cast<double>(s);

    const VarDecomp d = decompose(chains);
    if (d.degenerate || d.var_plus <= 0.0) return {std::nan(""), true};

    std::vector<double> means(m);
    for (std::size_t k = 0; k < m; ++k) means[k] = mean_of(chains[k]);

    auto rho = [&](std::size_t t) {
        double c = 0.0;
        for (std::size_t k = 0; k < m; ++k) c += autocov(chains[k], means[k], t);
        c /= static_cast<double>(m);
        return 1.0 - (d.w - c) / d.var_plus;
    };

    // Geyer initial positive sequence: tau = -1 + 2*sum of paired
    // correlations (rho_2k + rho_2k+1), truncated at the first non-positive
    // pair.
    double tau = -1.0;
    for (std::size_t k = 0; 2 * k + 1 < s; ++k) {
        const double pair = rho(2 * k) + rho(2 * k + 1);
        if (pair <= 0.0) break;
        tau += 2.0 * pair;
    }
    double e = tau > 1e-12 ? total / tau : total;
    if (e > total) e = total;  // cap: never report better than iid
    return {e, false};
}

namespace {

ParamDiag diag_for(const std::string& name, const std::vector<std::vector<double>>& chains) {
    ParamDiag pd;
    pd.name = name;

    std::vector<double> pooled;
    for (const auto& c : chains) pooled.insert(pooled.end(), c.begin(), c.end());
    pd.mean = mean_of(pooled);
    pd.sd = sample_sd(pooled);

    const RhatResult r = split_rhat(chains);
    pd.rhat_defined = !r.degenerate;
    pd.rhat = r.value;
    const EssResult e = ess(chains);
    pd.ess_defined = !e.degenerate;
    if (pd.ess_defined) {
        pd.ess = e.value;
        pd.mcse = pd.sd / std::sqrt(e.value);
        pd.mcse_over_sd = pd.sd > 0.0 ? pd.mcse / pd.sd : 0.0;
        pd.ess_over_s = e.value / static_cast<double>(pooled.size());
    }
    if (std::fabs(pd.mean) >= 1e-12) {
        pd.cv_defined = true;
        pd.cv_pct = 100.0 * pd.sd / std::fabs(pd.mean);
    }
    return pd;
}

}  // namespace

DiagnosticsReport summarize_diagnostics(const PosteriorDraws& draws) {
    DiagnosticsReport rep;
    if (draws.chain_draws.empty()) throw ValidationError("no chains to diagnose");
    if (draws.config.chains < 2)
        rep.warning = "split R-hat requires >= 2 chains; single-chain values use "
                      "half-chains of the one available chain";

    const std::size_t p = draws.p_dim();
    const std::size_t nchains = draws.chain_draws.size();
    for (std::size_t k = 0; k < p; ++k) {
        std::vector<std::vector<double>> per_chain;
        per_chain.reserve(nchains);
        for (std::size_t c = 0; c < nchains; ++c) per_chain.push_back(draws.column(c, k));
        rep.params.push_back(diag_for(draws.param_names[k], per_chain));
    }
    rep.params.push_back(diag_for("lp", draws.chain_lp));
    rep.lp_trace = draws.chain_lp;
    return rep;
}

void write_diagnostics_csv(const std::string& path, const DiagnosticsReport& report) {
    CsvWriter w(path);
    w.row({"param", "mean", "sd", "rhat", "ess", "mcse", "mcse_over_sd", "ess_over_s",
           "cv_pct"});
    for (const auto& pd : report.params) {
        w.row({pd.name, fmt_num(pd.mean), fmt_num(pd.sd),
               pd.rhat_defined ? fmt_num(pd.rhat) : "NA",
               pd.ess_defined ? fmt_num(pd.ess) : "NA",
               pd.ess_defined ? fmt_num(pd.mcse) : "NA",
               pd.ess_defined ? fmt_num(pd.mcse_over_sd) : "NA",
               pd.ess_defined ? fmt_num(pd.ess_over_s) : "NA",
               pd.cv_defined ? fmt_num(pd.cv_pct) : "NA"});
    }
    w.close();
}

}  // namespace ideal
