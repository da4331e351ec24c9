// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "ideal/diagnostics.hpp"
#include "ideal/errors.hpp"
#include "ideal/mathutil.hpp"
#include "ideal/rng.hpp"

namespace ideal {

void LogisticData::validate() const {
    if (x.size() != y.size()) throw ValidationError("x and y lengths differ");
    if (x.size() < 2) throw ValidationError("need at least 2 observations");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]))
            throw ValidationError("non-finite x at row " + std::to_string(i + 1));
        if (y[i] != 0 && y[i] != 1)
            throw ValidationError("y must be 0/1 at row " + std::to_string(i + 1));
    }
}

namespace {

void require_both_classes(const LogisticData& data) {
    bool has0 = false, has1 = false;
    for (int v : data.y) (v == 1 ? has1 : has0) = true;
    if (!has0 || !has1)
        throw ValidationError("outcome is single-class; logistic fit undefined");
}

double bern_log_lik(double eta, int y) { return -softplus(y == 1 ? -eta : eta); }

// Invert a k x k SPD-ish matrix (k <= 3) by Gauss-Jordan with partial
// pivoting; throws on singular systems.
std::vector<double> invert_small(std::vector<double> a, std::size_t k) {
    std::vector<double> inv(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) inv[i * k + i] = 1.0;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(a[r * k + col]) > std::fabs(a[piv * k + col])) piv = r;
        if (std::fabs(a[piv * k + col]) < 1e-12)
            throw ValidationError("singular information matrix (degenerate design)");
        if (piv != col)
            for (std::size_t j = 0; j < k; ++j) {
                std::swap(a[piv * k + j], a[col * k + j]);
                std::swap(inv[piv * k + j], inv[col * k + j]);
            }
        const double d = a[col * k + col];
        for (std::size_t j = 0; j < k; ++j) {
            a[col * k + j] /= d;
            inv[col * k + j] /= d;
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = a[r * k + col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                a[r * k + j] -= f * a[col * k + j];
                inv[r * k + j] -= f * inv[col * k + j];
            }
        }
    }
    return inv;
}

struct GlmFit {
    std::vector<double> beta;
    std::vector<double> cov;  // k x k
    std::vector<double> fitted;
    std::vector<double> leverage;
    double deviance = 0.0;
    int iters = 0;
    bool converged = false;
};

// Newton/IRLS on a dense n x k design, k <= 3. The divergence bound is the
// separation detector for the base model; the augmented linearity check runs
// with a far looser bound because its collinear extra column legitimately
// drives coefficients past any base-scale cutoff.
GlmFit irls(const std::vector<double>& X, std::size_t n, std::size_t k,
            const std::vector<int>& y, double diverge_bound = 30.0) {
    GlmFit fit;
    fit.beta.assign(k, 0.0);
    std::vector<double> eta(n), p(n), w(n);

    for (int it = 1; it <= 25; ++it) {
        fit.iters = it;
        for (std::size_t i = 0; i < n; ++i) {
            double e = 0.0;
            for (std::size_t j = 0; j < k; ++j) e += X[i * k + j] * fit.beta[j];
            eta[i] = e;
            p[i] = logistic_cdf(e);
            w[i] = p[i] * (1.0 - p[i]);
        }
        std::vector<double> score(k, 0.0), info(k * k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = static_cast<double>(y[i]) - p[i];
            for (std::size_t j = 0; j < k; ++j) {
                score[j] += X[i * k + j] * r;
                for (std::size_t l = 0; l <= j; ++l)
                    info[j * k + l] += w[i] * X[i * k + j] * X[i * k + l];
            }
        }
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = j + 1; l < k; ++l) info[j * k + l] = info[l * k + j];

        double max_score = 0.0;
        for (double sc : score) max_score = std::max(max_score, std::fabs(sc));
        if (max_score < 1e-8) {
            fit.converged = true;
            fit.cov = invert_small(info, k);
            break;
        }

        const std::vector<double> inv = invert_small(info, k);
        for (std::size_t j = 0; j < k; ++j) {
            double step = 0.0;
            for (std::size_t l = 0; l < k; ++l) step += inv[j * k + l] * score[l];
            fit.beta[j] += step;
        }
        for (double bj : fit.beta)
            if (std::fabs(bj) > diverge_bound)
                throw NumericError("coefficients diverging (complete separation)");
        if (it == 25) {
            // keep last covariance for reporting even without full convergence
            fit.cov = inv;
        }
    }

    fit.fitted.resize(n);
    fit.leverage.resize(n);
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = 0.0;
        for (std::size_t j = 0; j < k; ++j) e += X[i * k + j] * fit.beta[j];
        fit.fitted[i] = logistic_cdf(e);
        dev += bern_log_lik(e, y[i]);
        const double wi = fit.fitted[i] * (1.0 - fit.fitted[i]);
        double q = 0.0;  // x_i' cov x_i
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l)
                q += X[i * k + j] * fit.cov[j * k + l] * X[i * k + l];
        fit.leverage[i] = wi * q;
    }
    fit.deviance = -2.0 * dev;
    return fit;
}

double null_deviance_of(const std::vector<int>& y) {
    const std::size_t n = y.size();
    std::size_t n1 = 0;
    for (int v : y) n1 += static_cast<std::size_t>(v);
    const double pbar = static_cast<double>(n1) / static_cast<double>(n);
    double ll = 0.0;
    if (n1 > 0) ll += static_cast<double>(n1) * std::log(pbar);
    if (n1 < n) ll += static_cast<double>(n - n1) * std::log(1.0 - pbar);
    return -2.0 * ll;
}

}  // namespace

LogisticFit fit_mle(const LogisticData& data) {
    data.validate();
    require_both_classes(data);

    const std::size_t n = data.size();
    std::vector<double> X(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        X[i * 2] = 1.0;
        X[i * 2 + 1] = data.x[i];
    }
    const GlmFit g = irls(X, n, 2, data.y);

    LogisticFit fit;
    fit.beta0 = g.beta[0];
    fit.beta1 = g.beta[1];
    fit.se0 = std::sqrt(g.cov[0]);
    fit.se1 = std::sqrt(g.cov[3]);
    fit.z0 = fit.beta0 / fit.se0;
    fit.z1 = fit.beta1 / fit.se1;
    fit.p0 = normal_two_sided_p(fit.z0);
    fit.p1 = normal_two_sided_p(fit.z1);
    fit.residual_deviance = g.deviance;
    fit.null_deviance = null_deviance_of(data.y);
    fit.aic = fit.residual_deviance + 4.0;
    fit.iterations = g.iters;
    fit.converged = g.converged;
    fit.fitted = g.fitted;
    fit.leverage = g.leverage;
    fit.data = data;
    return fit;
}

LrtResult lrt_chisq(const LogisticFit& fit) {
    LrtResult r;
    r.statistic = fit.null_deviance - fit.residual_deviance;
    r.df = 1;
    r.p = chisq1_sf(r.statistic);
    return r;
}

OddsRatios odds_ratio(const LogisticFit& fit) {
    return {std::exp(fit.beta0), std::exp(fit.beta1)};
}

RocResult roc_auc(const LogisticFit& fit) {
    const std::size_t n = fit.data.size();
    require_both_classes(fit.data);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fit.fitted[a] > fit.fitted[b];
    });

    double pos = 0.0, neg = 0.0;
    for (int v : fit.data.y) (v == 1 ? pos : neg) += 1.0;

    RocResult roc;
    roc.points.emplace_back(0.0, 0.0);
    // area computed from pair counts (Mann-Whitney form) so it equals the
    // concordance fraction exactly, with no trapezoid round-off
    double tp = 0.0, fp = 0.0, concordant = 0.0, tied = 0.0;
    std::size_t i = 0;
    while (i < n) {
        // advance over one tied score group so ties form one segment
        std::size_t j = i;
        double gtp = 0.0, gfp = 0.0;
        while (j < n && fit.fitted[order[j]] == fit.fitted[order[i]]) {
            if (fit.data.y[order[j]] == 1) gtp += 1.0;
            else gfp += 1.0;
            ++j;
        }
        concordant += gfp * tp;  // these negatives rank below every earlier positive
        tied += gtp * gfp;
        tp += gtp;
        fp += gfp;
        roc.points.emplace_back(fp / neg, tp / pos);
        i = j;
    }
    roc.auc = (concordant + 0.5 * tied) / (pos * neg);
    return roc;
}

BoxTidwellResult box_tidwell(const LogisticData& data) {
    data.validate();
    require_both_classes(data);

    const std::size_t n = data.size();
    const double xmin = *std::min_element(data.x.begin(), data.x.end());
    const double shift = 1.0 - xmin;

    std::vector<double> X(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double xt = data.x[i] + shift;
        X[i * 3] = 1.0;
        X[i * 3 + 1] = data.x[i];
        X[i * 3 + 2] = xt * std::log(xt);
    }
    const GlmFit g = irls(X, n, 3, data.y, 1e6);

    BoxTidwellResult r;
    r.shift = shift;
    const double se = std::sqrt(g.cov[8]);
    r.statistic = g.beta[2] / se;
    r.p = normal_two_sided_p(r.statistic);
    return r;
}

CooksResult cooks_distance(const LogisticFit& fit) {
    const std::size_t n = fit.data.size();
    CooksResult r;
    r.threshold = 4.0 / static_cast<double>(n);
    r.d.resize(n);
    r.influential.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = fit.fitted[i];
        const double w = p * (1.0 - p);
        const double rp = (static_cast<double>(fit.data.y[i]) - p) / std::sqrt(w);
        const double h = fit.leverage[i];
        r.d[i] = rp * rp * h / (2.0 * (1.0 - h) * (1.0 - h));
        r.influential[i] = r.d[i] > r.threshold;
    }
    return r;
}

namespace {

double bayes_log_post(const LogisticData& data, double b0, double b1, double prior_sd) {
    double lp = -0.5 * (b0 * b0 + b1 * b1) / (prior_sd * prior_sd);
    for (std::size_t i = 0; i < data.size(); ++i)
        lp += bern_log_lik(b0 + b1 * data.x[i], data.y[i]);
    return lp;
}

BayesParamSummary bayes_summary(const std::vector<std::vector<double>>& chains) {
    BayesParamSummary s;
    std::vector<double> pooled;
    for (const auto& c : chains) pooled.insert(pooled.end(), c.begin(), c.end());
    s.mean = mean_of(pooled);
    s.sd = sample_sd(pooled);
    std::sort(pooled.begin(), pooled.end());
    s.p10 = quantile_sorted(pooled, 0.10);
    s.p50 = quantile_sorted(pooled, 0.50);
    s.p90 = quantile_sorted(pooled, 0.90);
    const RhatResult r = split_rhat(chains);
    s.rhat = r.degenerate ? std::nan("") : r.value;
    const EssResult e = ess(chains);
    s.n_eff = e.degenerate ? std::nan("") : e.value;
    s.mcse = e.degenerate ? std::nan("") : s.sd / std::sqrt(e.value);
    return s;
}

}  // namespace

BayesLogisticFit fit_bayes(const LogisticData& data, const BayesLogisticConfig& config) {
    data.validate();
    require_both_classes(data);
    if (!(config.prior_sd > 0.0)) throw ValidationError("prior_sd must be > 0");
    if (config.chains < 2) throw ValidationError("fit_bayes needs >= 2 chains");
    if (config.warmup < 0 || config.warmup >= config.iterations)
        throw ValidationError("warmup must satisfy 0 <= warmup < iterations");

    // Laplace-style preconditioning: curvature = MLE information plus the
    // prior precision, so proposals stay sane even under very tight priors.
    const LogisticFit mle = fit_mle(data);
    std::vector<double> infom(4, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = mle.fitted[i];
        const double w = p * (1.0 - p);
        const double xi = data.x[i];
        infom[0] += w;
        infom[1] += w * xi;
        infom[3] += w * xi * xi;
    }
    infom[2] = infom[1];
    const double prior_prec = 1.0 / (config.prior_sd * config.prior_sd);
    std::vector<double> curv = infom;
    curv[0] += prior_prec;
    curv[3] += prior_prec;
    const std::vector<double> cov_prop = invert_small(curv, 2);
    const double l11 = std::sqrt(cov_prop[0]);
    const double l21 = cov_prop[1] / l11;
    const double l22 = std::sqrt(std::max(cov_prop[3] - l21 * l21, 1e-30));

    // start at the Laplace mean: curv^-1 * (information * MLE)
    const double g0 = infom[0] * mle.beta0 + infom[1] * mle.beta1;
    const double g1 = infom[2] * mle.beta0 + infom[3] * mle.beta1;
    const double start0 = cov_prop[0] * g0 + cov_prop[1] * g1;
    const double start1 = cov_prop[2] * g0 + cov_prop[3] * g1;

    const long long retained = config.iterations - config.warmup;
    std::vector<std::vector<double>> draws0(config.chains), draws1(config.chains);
    double acc_total = 0.0, tries_total = 0.0;

    for (int c = 0; c < config.chains; ++c) {
        Rng rng(config.seed + static_cast<std::uint64_t>(c));
        double b0 = start0 + 0.1 * l11 * rng.normal();
        double b1 = start1 + 0.1 * l22 * rng.normal();
        double lp = bayes_log_post(data, b0, b1, config.prior_sd);
        double scale = 1.7;  // ~2.4/sqrt(2)
        std::uint32_t acc = 0, tries = 0;

        draws0[c].reserve(static_cast<std::size_t>(retained));
        draws1[c].reserve(static_cast<std::size_t>(retained));
        for (long long t = 1; t <= config.iterations; ++t) {
            const double z1 = rng.normal(), z2 = rng.normal();
            const double pb0 = b0 + scale * l11 * z1;
            const double pb1 = b1 + scale * (l21 * z1 + l22 * z2);
            const double plp = bayes_log_post(data, pb0, pb1, config.prior_sd);
            ++tries;
            if (std::log(rng.uniform()) < plp - lp) {
                b0 = pb0;
                b1 = pb1;
                lp = plp;
                ++acc;
            }
            if (t <= config.warmup && t % 50 == 0) {
                const double rate = static_cast<double>(acc) / static_cast<double>(tries);
                if (rate > 0.5) scale *= 1.25;
                else if (rate < 0.3) scale *= 0.8;
                scale = std::max(scale, 1e-4);
                acc = tries = 0;
            }
            if (t == config.warmup) acc = tries = 0;
            if (t > config.warmup) {
                draws0[c].push_back(b0);
                draws1[c].push_back(b1);
            }
        }
        acc_total += acc;
        tries_total += tries;
    }

    BayesLogisticFit out;
    out.beta0 = bayes_summary(draws0);
    out.beta1 = bayes_summary(draws1);
    out.accept_rate = tries_total > 0 ? acc_total / tries_total : 0.0;
    out.chains = config.chains;
    out.retained_per_chain = retained;
    return out;
}

}  // namespace ideal
