// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/mcmc.hpp"

#include <cmath>
#include <filesystem>

#include "ideal/csv.hpp"
#include "ideal/errors.hpp"
#include "ideal/keyval.hpp"
#include "ideal/mathutil.hpp"

namespace ideal {

const char* init_rule_name(InitRule r) {
    switch (r) {
        case InitRule::BlocSigns: return "bloc_signs";
        case InitRule::PriorDraw: return "prior_draw";
        case InitRule::Zeros: return "zeros";
    }
    return "?";
}

InitRule parse_init_rule(const std::string& s) {
    if (s == "bloc_signs") return InitRule::BlocSigns;
    if (s == "prior_draw") return InitRule::PriorDraw;
    if (s == "zeros") return InitRule::Zeros;
    throw ValidationError("unknown init rule '" + s +
                          "' (expected bloc_signs, prior_draw, or zeros)");
}

void McmcConfig::validate() const {
    if (iterations <= 0) throw ValidationError("iterations must be positive");
    if (warmup < 0 || warmup >= iterations)
        throw ValidationError("warmup must satisfy 0 <= warmup < iterations");
    if (thin <= 0) throw ValidationError("thin must be positive");
    if (chains < 1) throw ValidationError("chains must be >= 1");
    if (adapt_window <= 0) throw ValidationError("adapt_window must be positive");
    if (retained_per_chain() < 100)
        throw ValidationError("retained draws per chain = " +
                              std::to_string(retained_per_chain()) + ", need >= 100");
}

ObsIndex ObsIndex::build(const ModelView& view) {
    ObsIndex idx;
    idx.n = view.n;
    idx.m = view.m;
    idx.by_col.resize(view.m);
    idx.by_row.resize(view.n);
    for (std::size_t i = 0; i < view.n; ++i) {
        const std::int8_t* row = view.y.data() + i * view.m;
        for (std::size_t j = 0; j < view.m; ++j) {
            if (row[j] < 0) continue;
            idx.by_col[j].emplace_back(static_cast<std::uint32_t>(i), row[j]);
            idx.by_row[i].emplace_back(static_cast<std::uint32_t>(j), row[j]);
        }
    }
    return idx;
}

LatentState init_state(const McmcConfig& config, const Roster& roster,
                       const PriorSpec& priors, std::size_t m, Rng& rng) {
    priors.validate();
    LatentState st;
    st.items.mu.assign(m, 0.0);
    st.items.alpha.assign(m, 0.0);
    st.points = anchored_points(roster);

    switch (config.init_rule) {
        case InitRule::Zeros:
            break;  // anchors already pinned, everything else 0
        case InitRule::BlocSigns:
            for (std::size_t i = 0; i < roster.size(); ++i)
                if (!st.points.anchored[i])
                    st.points.beta[i] = roster[i].bloc == Bloc::Coalition ? 1.0 : -1.0;
            break;
        case InitRule::PriorDraw: {
            const double sd_item = std::sqrt(priors.A0);
            const double sd_beta = std::sqrt(priors.B);
            for (std::size_t j = 0; j < m; ++j) {
                st.items.mu[j] = rng.normal(priors.alpha0, sd_item);
                st.items.alpha[j] = rng.normal(priors.alpha0, sd_item);
            }
            for (std::size_t i = 0; i < roster.size(); ++i)
                if (!st.points.anchored[i]) st.points.beta[i] = rng.normal(priors.b, sd_beta);
            break;
        }
    }

    st.item_scale.assign(m, 0.5);
    st.beta_scale.assign(roster.size(), 0.5);
    st.item_accept.assign(m, 0);
    st.item_tries.assign(m, 0);
    st.beta_accept.assign(roster.size(), 0);
    st.beta_tries.assign(roster.size(), 0);
    return st;
}

void step_probit_gibbs(LatentState& state, const ObsIndex& idx, const PriorSpec& priors,
                       Rng& rng) {
    const std::size_t n = idx.n, m = idx.m;
    if (state.ystar.size() != n * m) state.ystar.assign(n * m, 0.0);

    // latent utilities: y* ~ N(mu_j + alpha_j beta_i, 1) truncated by the vote
    for (std::size_t i = 0; i < n; ++i) {
        const double b = state.points.beta[i];
        for (const auto& [j, y] : idx.by_row[i]) {
            const double x = state.items.mu[j] + state.items.alpha[j] * b;
            state.ystar[i * m + j] = truncated_normal_halfline(rng, x, 1.0, y == 1);
        }
    }

    // (mu_j, alpha_j) pairs: bivariate normal full conditional from the
    // per-column regression of y* on (1, beta_i)
    const double item_prec = 1.0 / priors.A0;
    for (std::size_t j = 0; j < m; ++j) {
        double s11 = 0.0, s1b = 0.0, sbb = 0.0, sy = 0.0, sby = 0.0;
        for (const auto& [i, y] : idx.by_col[j]) {
            (void)y;
            const double b = state.points.beta[i];
            const double ys = state.ystar[static_cast<std::size_t>(i) * m + j];
            s11 += 1.0;
            s1b += b;
            sbb += b * b;
            sy += ys;
            sby += b * ys;
        }
        const double a = item_prec + s11;
        const double c = s1b;
        const double d = item_prec + sbb;
        const double r1 = priors.alpha0 * item_prec + sy;
        const double r2 = priors.alpha0 * item_prec + sby;
        const double det = a * d - c * c;
        if (!(det > 0.0)) throw NumericError("singular item full conditional");
        const double mean_mu = (d * r1 - c * r2) / det;
        const double mean_al = (a * r2 - c * r1) / det;
        // precision Cholesky: L L^T = [[a,c],[c,d]]; draw mean + L^-T z
        const double l11 = std::sqrt(a);
        const double l21 = c / l11;
        const double l22 = std::sqrt(d - l21 * l21);
        const double z1 = rng.normal(), z2 = rng.normal();
        const double u2 = z2 / l22;
        const double u1 = (z1 - l21 * u2) / l11;
        state.items.mu[j] = mean_mu + u1;
        state.items.alpha[j] = mean_al + u2;
    }

    // free ideal points: scalar normal full conditionals
    const double beta_prec0 = 1.0 / priors.B;
    for (std::size_t i = 0; i < n; ++i) {
        if (state.points.anchored[i]) continue;
        double prec = beta_prec0;
        double lin = priors.b * beta_prec0;
        for (const auto& [j, y] : idx.by_row[i]) {
            (void)y;
            const double al = state.items.alpha[j];
            prec += al * al;
            lin += al * (state.ystar[i * m + j] - state.items.mu[j]);
        }
        state.points.beta[i] = lin / prec + rng.normal() / std::sqrt(prec);
    }
}

namespace {

double item_block_logp(const LatentState& st, const ObsIndex& idx, const PriorSpec& priors,
                       std::size_t j, double mu, double alpha) {
    double lp = -0.5 * ((mu - priors.alpha0) * (mu - priors.alpha0) +
                        (alpha - priors.alpha0) * (alpha - priors.alpha0)) /
                priors.A0;
    for (const auto& [i, y] : idx.by_col[j])
        lp += cell_log_prob(Link::Logit, mu + alpha * st.points.beta[i], y);
    return lp;
}

double beta_block_logp(const LatentState& st, const ObsIndex& idx, const PriorSpec& priors,
                       std::size_t i, double beta) {
    double lp = -0.5 * (beta - priors.b) * (beta - priors.b) / priors.B;
    for (const auto& [j, y] : idx.by_row[i])
        lp += cell_log_prob(Link::Logit, st.items.mu[j] + st.items.alpha[j] * beta, y);
    return lp;
}

}  // namespace

void step_logit_mh(LatentState& state, const ObsIndex& idx, const PriorSpec& priors,
                   Rng& rng) {
    const std::size_t n = idx.n, m = idx.m;

    for (std::size_t j = 0; j < m; ++j) {
        const double cur = item_block_logp(state, idx, priors, j, state.items.mu[j],
                                           state.items.alpha[j]);
        const double s = state.item_scale[j];
        const double pm = state.items.mu[j] + s * rng.normal();
        const double pa = state.items.alpha[j] + s * rng.normal();
        const double prop = item_block_logp(state, idx, priors, j, pm, pa);
        ++state.item_tries[j];
        if (std::log(rng.uniform()) < prop - cur) {
            state.items.mu[j] = pm;
            state.items.alpha[j] = pa;
            ++state.item_accept[j];
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (state.points.anchored[i]) continue;
        const double cur = beta_block_logp(state, idx, priors, i, state.points.beta[i]);
        const double pb = state.points.beta[i] + state.beta_scale[i] * rng.normal();
        const double prop = beta_block_logp(state, idx, priors, i, pb);
        ++state.beta_tries[i];
        if (std::log(rng.uniform()) < prop - cur) {
            state.points.beta[i] = pb;
            ++state.beta_accept[i];
        }
    }
}

void adapt_scales(LatentState& state) {
    static constexpr double kMinScale = 1e-4;
    auto tune = [](double scale, std::uint32_t acc, std::uint32_t tries) {
        if (tries == 0) return scale;
        const double rate = static_cast<double>(acc) / static_cast<double>(tries);
        if (rate > 0.5) scale *= 1.25;
        else if (rate < 0.3) scale *= 0.8;
        return std::max(scale, kMinScale);
    };
    for (std::size_t j = 0; j < state.item_scale.size(); ++j) {
        state.item_scale[j] = tune(state.item_scale[j], state.item_accept[j],
                                   state.item_tries[j]);
        state.item_accept[j] = state.item_tries[j] = 0;
    }
    for (std::size_t i = 0; i < state.beta_scale.size(); ++i) {
        state.beta_scale[i] = tune(state.beta_scale[i], state.beta_accept[i],
                                   state.beta_tries[i]);
        state.beta_accept[i] = state.beta_tries[i] = 0;
    }
}

std::vector<double> PosteriorDraws::column(std::size_t chain, std::size_t param) const {
    const std::size_t p = p_dim();
    std::vector<double> out(static_cast<std::size_t>(retained));
    const auto& d = chain_draws[chain];
    for (long long s = 0; s < retained; ++s)
        out[static_cast<std::size_t>(s)] = d[static_cast<std::size_t>(s) * p + param];
    return out;
}

std::vector<double> PosteriorDraws::pooled(std::size_t param) const {
    std::vector<double> out;
    out.reserve(chain_draws.size() * static_cast<std::size_t>(retained));
    for (std::size_t c = 0; c < chain_draws.size(); ++c) {
        auto col = column(c, param);
        out.insert(out.end(), col.begin(), col.end());
    }
    return out;
}

PosteriorDraws run(const McmcConfig& config, const ModelView& view, const Roster& roster,
                   const PriorSpec& priors, Link link) {
    config.validate();
    priors.validate();
    if (roster.size() != view.n)
        throw ValidationError("roster size does not match vote matrix rows");

    const ObsIndex idx = ObsIndex::build(view);

    PosteriorDraws out;
    out.m = view.m;
    out.n = view.n;
    out.retained = config.retained_per_chain();
    out.config = config;
    out.link = link;
    out.priors = priors;

    for (std::size_t j = 0; j < view.m; ++j)
        out.param_names.push_back("mu_" + std::to_string(j + 1));
    for (std::size_t j = 0; j < view.m; ++j)
        out.param_names.push_back("alpha_" + std::to_string(j + 1));
    {
        const IdealPoints pts = anchored_points(roster);
        for (std::size_t i = 0; i < roster.size(); ++i)
            if (!pts.anchored[i]) {
                out.param_names.push_back("beta_" + roster[i].id);
                out.free_rows.push_back(i);
            }
    }
    const std::size_t p = out.p_dim();

    for (int chain = 0; chain < config.chains; ++chain) {
        Rng rng(config.seed + static_cast<std::uint64_t>(chain));
        LatentState st = init_state(config, roster, priors, view.m, rng);

        const double lp0 = log_posterior(view, st.items, st.points, priors, link);
        if (!std::isfinite(lp0))
            throw NumericError("non-finite log-posterior at initialization (chain " +
                               std::to_string(chain + 1) + ")");

        std::vector<double> draws;
        draws.reserve(static_cast<std::size_t>(out.retained) * p);
        std::vector<double> lps;
        lps.reserve(static_cast<std::size_t>(out.retained));

        for (long long t = 1; t <= config.iterations; ++t) {
            if (link == Link::Probit) step_probit_gibbs(st, idx, priors, rng);
            else step_logit_mh(st, idx, priors, rng);

            if (link == Link::Logit && t <= config.warmup && t % config.adapt_window == 0)
                adapt_scales(st);
            if (t == config.warmup) {
                // report acceptance over the stationary segment only
                std::fill(st.item_accept.begin(), st.item_accept.end(), 0);
                std::fill(st.item_tries.begin(), st.item_tries.end(), 0);
                std::fill(st.beta_accept.begin(), st.beta_accept.end(), 0);
                std::fill(st.beta_tries.begin(), st.beta_tries.end(), 0);
            }
            if (t > config.warmup && (t - config.warmup) % config.thin == 0) {
                for (std::size_t j = 0; j < view.m; ++j) draws.push_back(st.items.mu[j]);
                for (std::size_t j = 0; j < view.m; ++j) draws.push_back(st.items.alpha[j]);
                for (std::size_t i : out.free_rows) draws.push_back(st.points.beta[i]);
                lps.push_back(log_posterior(view, st.items, st.points, priors, link));
            }
        }

        ChainReport rep;
        if (link == Link::Logit) {
            double ia = 0, it = 0, ba = 0, bt = 0;
            for (std::size_t j = 0; j < view.m; ++j) {
                ia += st.item_accept[j];
                it += st.item_tries[j];
            }
            for (std::size_t i : out.free_rows) {
                ba += st.beta_accept[i];
                bt += st.beta_tries[i];
            }
            rep.item_accept_rate = it > 0 ? ia / it : 0.0;
            rep.beta_accept_rate = bt > 0 ? ba / bt : 0.0;
        } else {
            rep.item_accept_rate = 1.0;  // Gibbs draws are always accepted
            rep.beta_accept_rate = 1.0;
        }
        rep.mean_item_scale = mean_of(st.item_scale);
        double bs = 0.0;
        for (std::size_t i : out.free_rows) bs += st.beta_scale[i];
        rep.mean_beta_scale = out.free_rows.empty() ? 0.0 : bs / out.free_rows.size();
        out.reports.push_back(rep);

        out.chain_draws.push_back(std::move(draws));
        out.chain_lp.push_back(std::move(lps));
    }
    return out;
}

void write_draws(const std::string& dir, const PosteriorDraws& draws) {
    std::filesystem::create_directories(dir);
    const std::size_t p = draws.p_dim();
    for (std::size_t c = 0; c < draws.chain_draws.size(); ++c) {
        CsvWriter w(dir + "/draws_chain" + std::to_string(c + 1) + ".csv");
        std::vector<std::string> head = draws.param_names;
        head.push_back("lp");
        w.row(head);
        const auto& d = draws.chain_draws[c];
        for (long long s = 0; s < draws.retained; ++s) {
            std::vector<std::string> row;
            row.reserve(p + 1);
            for (std::size_t k = 0; k < p; ++k)
                row.push_back(fmt_num(d[static_cast<std::size_t>(s) * p + k]));
            row.push_back(fmt_num(draws.chain_lp[c][static_cast<std::size_t>(s)]));
            w.row(row);
        }
        w.close();
    }
}

std::map<std::string, std::string> manifest_entries(const PosteriorDraws& draws) {
    std::map<std::string, std::string> kv;
    kv["link"] = link_name(draws.link);
    kv["alpha0"] = fmt_num(draws.priors.alpha0);
    kv["A0"] = fmt_num(draws.priors.A0);
    kv["b"] = fmt_num(draws.priors.b);
    kv["B"] = fmt_num(draws.priors.B);
    kv["iterations"] = std::to_string(draws.config.iterations);
    kv["warmup"] = std::to_string(draws.config.warmup);
    kv["thin"] = std::to_string(draws.config.thin);
    kv["chains"] = std::to_string(draws.config.chains);
    kv["seed"] = std::to_string(draws.config.seed);
    kv["init_rule"] = init_rule_name(draws.config.init_rule);
    kv["adapt_window"] = std::to_string(draws.config.adapt_window);
    kv["retained_per_chain"] = std::to_string(draws.retained);
    kv["n_legislators"] = std::to_string(draws.n);
    kv["m_lists"] = std::to_string(draws.m);
    kv["p_dim"] = std::to_string(draws.p_dim());
    for (std::size_t c = 0; c < draws.reports.size(); ++c) {
        const std::string pre = "chain" + std::to_string(c + 1) + "_";
        kv[pre + "item_accept_rate"] = fmt_num(draws.reports[c].item_accept_rate);
        kv[pre + "beta_accept_rate"] = fmt_num(draws.reports[c].beta_accept_rate);
        kv[pre + "mean_item_scale"] = fmt_num(draws.reports[c].mean_item_scale);
        kv[pre + "mean_beta_scale"] = fmt_num(draws.reports[c].mean_beta_scale);
    }
    return kv;
}

PosteriorDraws read_draws(const std::string& dir) {
    PosteriorDraws out;
    for (int c = 1;; ++c) {
        const std::string path = dir + "/draws_chain" + std::to_string(c) + ".csv";
        if (!std::filesystem::exists(path)) break;
        const Table t = read_csv(path);
        if (t.ncol() < 2 || t.header.back() != "lp")
            throw ValidationError(path + ": expected parameter columns plus trailing lp");
        if (c == 1) {
            out.param_names.assign(t.header.begin(), t.header.end() - 1);
            std::size_t m = 0;
            for (const auto& nm : out.param_names)
                if (nm.rfind("mu_", 0) == 0) ++m;
            out.m = m;
            out.retained = static_cast<long long>(t.nrow());
        } else if (t.header.size() != out.param_names.size() + 1 ||
                   static_cast<long long>(t.nrow()) != out.retained) {
            throw ValidationError(path + ": chain files disagree in shape");
        }
        const std::size_t p = out.param_names.size();
        std::vector<double> draws(t.nrow() * p);
        std::vector<double> lps(t.nrow());
        for (std::size_t r = 0; r < t.nrow(); ++r) {
            for (std::size_t k = 0; k < p; ++k) draws[r * p + k] = std::stod(t.rows[r][k]);
            lps[r] = std::stod(t.rows[r][p]);
        }
        out.chain_draws.push_back(std::move(draws));
        out.chain_lp.push_back(std::move(lps));
    }
    if (out.chain_draws.empty())
        throw ValidationError("no draws_chain*.csv files in " + dir);
    out.config.chains = static_cast<int>(out.chain_draws.size());

    const std::string mpath = dir + "/manifest.txt";
    if (std::filesystem::exists(mpath)) {
        const auto kv = read_keyval(mpath);
        if (kv.count("link")) out.link = parse_link(kv.at("link"));
        if (kv.count("seed")) out.config.seed = static_cast<std::uint64_t>(kv_int(kv, "seed"));
        if (kv.count("n_legislators"))
            out.n = static_cast<std::size_t>(kv_int(kv, "n_legislators"));
    }
    return out;
}

}  // namespace ideal
