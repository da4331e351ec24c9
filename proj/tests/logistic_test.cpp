// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ideal/errors.hpp"
#include "ideal/logistic.hpp"
#include "ideal/mathutil.hpp"
#include "ideal/rng.hpp"

using namespace ideal;

namespace {

// Frozen 12-point fixture: overlapping classes, interior MLE.
LogisticData twelve_points() {
    LogisticData d;
    d.x = {-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
    d.y = {0, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 1};
    return d;
}

double nll(const LogisticData& d, double b0, double b1) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double eta = b0 + b1 * d.x[i];
        s += softplus(d.y[i] == 1 ? -eta : eta);
    }
    return s;
}

// Independent MLE oracle: coarse-to-fine scan of the (convex) negative
// log-likelihood over [-5,5]^2 down to step 1e-3.
std::pair<double, double> grid_mle(const LogisticData& d) {
    double lo0 = -5.0, hi0 = 5.0, lo1 = -5.0, hi1 = 5.0;
    double best0 = 0.0, best1 = 0.0;
    for (const double step : {0.1, 0.01, 0.001}) {
        double best = std::numeric_limits<double>::infinity();
        const int n0 = static_cast<int>(std::lround((hi0 - lo0) / step));
        const int n1 = static_cast<int>(std::lround((hi1 - lo1) / step));
        for (int i = 0; i <= n0; ++i)
            for (int j = 0; j <= n1; ++j) {
                const double b0 = lo0 + i * step;
                const double b1 = lo1 + j * step;
                const double v = nll(d, b0, b1);
                if (v < best) {
                    best = v;
                    best0 = b0;
                    best1 = b1;
                }
            }
        lo0 = std::max(best0 - 2.0 * step, -5.0);
        hi0 = std::min(best0 + 2.0 * step, 5.0);
        lo1 = std::max(best1 - 2.0 * step, -5.0);
        hi1 = std::min(best1 + 2.0 * step, 5.0);
    }
    return {best0, best1};
}

LogisticData bernoulli_sample(Rng& rng, std::size_t n, double b0, double b1,
                              bool uniform_x = false) {
    LogisticData d;
    d.x.resize(n);
    d.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.x[i] = uniform_x ? 4.0 * rng.uniform() - 2.0 : rng.normal();
        d.y[i] = rng.uniform() < logistic_cdf(b0 + b1 * d.x[i]) ? 1 : 0;
    }
    return d;
}

// Fit with prescribed scores, bypassing estimation, for ROC-only checks.
LogisticFit scored_fit(const std::vector<double>& fitted, const std::vector<int>& y) {
    LogisticFit f;
    f.fitted = fitted;
    f.data.x.assign(y.size(), 0.0);
    f.data.y = y;
    return f;
}

}  // namespace

TEST_CASE("input validation rejects malformed data") {
    LogisticData d;
    d.x = {0.0, 1.0};
    d.y = {0};
    CHECK_THROWS_AS(d.validate(), ValidationError);  // length mismatch
    d.y = {0, 1};
    CHECK_NOTHROW(d.validate());
    d.x = {0.0};
    d.y = {1};
    CHECK_THROWS_AS(d.validate(), ValidationError);  // too short
    d.x = {0.0, std::nan("")};
    d.y = {0, 1};
    CHECK_THROWS_AS(d.validate(), ValidationError);  // non-finite x
    d.x = {0.0, 1.0};
    d.y = {0, 2};
    CHECK_THROWS_AS(d.validate(), ValidationError);  // y outside {0,1}
}

TEST_CASE("single-class outcomes cannot be fit") {
    LogisticData d;
    d.x = {-1.0, 0.0, 1.0, 2.0};
    d.y = {1, 1, 1, 1};
    CHECK_THROWS_WITH_AS(fit_mle(d), doctest::Contains("single-class"), ValidationError);
    d.y = {0, 0, 0, 0};
    CHECK_THROWS_AS(fit_mle(d), ValidationError);
}

TEST_CASE("symmetric four-point data forces both coefficients to zero") {
    LogisticData d;
    d.x = {1.0, 1.0, -1.0, -1.0};
    d.y = {1, 0, 1, 0};
    const LogisticFit f = fit_mle(d);
    CHECK(f.converged);
    CHECK(std::fabs(f.beta0) < 1e-9);
    CHECK(std::fabs(f.beta1) < 1e-9);
    for (double p : f.fitted) CHECK(p == doctest::Approx(0.5).epsilon(1e-9));
    // no information in the predictor: the deviance drop is zero
    CHECK(f.residual_deviance == doctest::Approx(f.null_deviance).epsilon(1e-12));
    const LrtResult l = lrt_chisq(f);
    CHECK(l.statistic == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(l.df == 1);
    CHECK(l.p == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("maximum likelihood matches the dense grid-search oracle") {
    const LogisticData d = twelve_points();
    const LogisticFit f = fit_mle(d);
    REQUIRE(f.converged);
    const auto [g0, g1] = grid_mle(d);
    CHECK(std::fabs(f.beta0 - g0) < 2e-3);
    CHECK(std::fabs(f.beta1 - g1) < 2e-3);
    // the oracle's best cell really is the likelihood optimum's neighbourhood
    CHECK(nll(d, f.beta0, f.beta1) <= nll(d, g0, g1) + 1e-9);
}

TEST_CASE("fit invariants hold on the twelve-point fixture") {
    const LogisticFit f = fit_mle(twelve_points());
    CHECK(f.residual_deviance <= f.null_deviance);
    CHECK(f.aic == f.residual_deviance + 4.0);
    CHECK(f.se0 > 0.0);
    CHECK(f.se1 > 0.0);
    CHECK(f.z1 == doctest::Approx(f.beta1 / f.se1).epsilon(1e-12));
    CHECK(f.p1 == doctest::Approx(normal_two_sided_p(f.z1)).epsilon(1e-12));
    double lev_sum = 0.0;
    for (std::size_t i = 0; i < f.leverage.size(); ++i) {
        CHECK(f.fitted[i] > 0.0);
        CHECK(f.fitted[i] < 1.0);
        CHECK(f.leverage[i] > 0.0);
        CHECK(f.leverage[i] < 1.0);
        lev_sum += f.leverage[i];
    }
    // hat-matrix trace equals the parameter count
    CHECK(lev_sum == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("likelihood-ratio p-value recovers the chi-square reference point") {
    LogisticFit f;
    f.null_deviance = 3.841;
    f.residual_deviance = 0.0;
    const LrtResult l = lrt_chisq(f);
    CHECK(l.statistic == 3.841);
    CHECK(l.df == 1);
    // chisq1_sf(3.841) = 0.050013683763956705
    CHECK(l.p == doctest::Approx(0.050013683763956705).epsilon(1e-12));
    CHECK(std::fabs(l.p - 0.05) < 1e-3);
}

TEST_CASE("odds ratios exponentiate the coefficients") {
    LogisticFit f;
    CHECK(odds_ratio(f).intercept == 1.0);
    CHECK(odds_ratio(f).slope == 1.0);
    f.beta1 = std::log(2.0);
    CHECK(odds_ratio(f).slope == doctest::Approx(2.0).epsilon(1e-14));
    f.beta0 = 0.7857;
    f.beta1 = 0.7857;
    // exp(0.7857) = 2.193942162856784
    CHECK(odds_ratio(f).slope == doctest::Approx(2.193942162856784).epsilon(1e-14));
    CHECK(std::fabs(odds_ratio(f).slope - 2.194) < 1e-3);
    CHECK(odds_ratio(f).intercept == odds_ratio(f).slope);
}

TEST_CASE("area under the roc curve equals the pairwise concordance fraction") {
    Rng rng(29);
    const LogisticData d = bernoulli_sample(rng, 20, 0.2, 1.1);
    const LogisticFit f = fit_mle(d);
    const RocResult roc = roc_auc(f);

    double c = 0.0, t = 0.0, pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.y[i] != 1) continue;
        pos += 1.0;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d.y[j] == 1) continue;
            if (f.fitted[i] > f.fitted[j]) c += 1.0;
            else if (f.fitted[i] == f.fitted[j]) t += 1.0;
        }
    }
    for (int v : d.y) neg += (v == 0) ? 1.0 : 0.0;
    CHECK(roc.auc == (c + 0.5 * t) / (pos * neg));  // exact, not approximate
    CHECK(roc.points.front() == std::pair<double, double>(0.0, 0.0));
    CHECK(roc.points.back() == std::pair<double, double>(1.0, 1.0));
}

TEST_CASE("roc endpoints and reference scores") {
    // perfectly separating scores
    const RocResult sep = roc_auc(scored_fit({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}));
    CHECK(sep.auc == 1.0);
    // constant scores: one tie group covering everything
    const RocResult flat = roc_auc(scored_fit({0.5, 0.5, 0.5, 0.5}, {1, 1, 0, 0}));
    CHECK(flat.auc == 0.5);
    REQUIRE(flat.points.size() == 2);  // (0,0) then the single diagonal jump
    // mixed ties, worked by hand: c=2, t=3 over 6 pairs
    const RocResult mix = roc_auc(scored_fit({0.7, 0.7, 0.3, 0.3, 0.3}, {1, 0, 1, 0, 0}));
    CHECK(mix.auc == (2.0 + 0.5 * 3.0) / 6.0);
    // single-class scores are rejected
    CHECK_THROWS_AS(roc_auc(scored_fit({0.4, 0.6}, {1, 1})), ValidationError);
}

TEST_CASE("complete separation is flagged as a numeric error") {
    // tight predictor scale: the slope must blow past the divergence guard
    // before the score can underflow into apparent convergence
    LogisticData d;
    d.x = {-0.5, -0.4, -0.3, 0.3, 0.4, 0.5};
    d.y = {0, 0, 0, 1, 1, 1};
    CHECK_THROWS_AS(fit_mle(d), NumericError);
}

TEST_CASE("degenerate designs are rejected rather than inverted") {
    LogisticData d;
    d.x.assign(10, 1.5);  // constant predictor
    d.y = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    CHECK_THROWS_WITH_AS(fit_mle(d), doctest::Contains("singular"), ValidationError);
    CHECK_THROWS_AS(box_tidwell(d), ValidationError);
}

TEST_CASE("linearity check is calibrated near its nominal level") {
    Rng rng(41);
    int rejections = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const LogisticData d = bernoulli_sample(rng, 500, 0.3, 0.8, true);
        const BoxTidwellResult bt = box_tidwell(d);
        CHECK(bt.shift == 1.0 - *std::min_element(d.x.begin(), d.x.end()));
        if (bt.p < 0.05) ++rejections;
    }
    // Binomial(200, 0.05): mean 10, sd ~3.1
    CHECK(rejections >= 3);
    CHECK(rejections <= 19);
}

TEST_CASE("linearity check detects a quadratic distortion") {
    Rng rng(43);
    int rejections = 0;
    for (int r = 0; r < 20; ++r) {
        LogisticData d;
        d.x.resize(400);
        d.y.resize(400);
        for (std::size_t i = 0; i < d.x.size(); ++i) {
            d.x[i] = 4.0 * rng.uniform() - 2.0;
            const double eta = d.x[i] * d.x[i] - 1.5;  // curved on the logit scale
            d.y[i] = rng.uniform() < logistic_cdf(eta) ? 1 : 0;
        }
        if (box_tidwell(d).p < 0.05) ++rejections;
    }
    CHECK(rejections >= 14);
}

TEST_CASE("influence measure tracks exact leave-one-out refits") {
    Rng rng(23);
    LogisticData d = bernoulli_sample(rng, 24, 0.3, 0.9);
    d.x.push_back(4.0);  // gross outlier: extreme predictor, contrary outcome
    d.y.push_back(0);

    const LogisticFit f = fit_mle(d);
    const CooksResult cd = cooks_distance(f);
    const std::size_t n = d.size();
    REQUIRE(cd.d.size() == n);
    CHECK(cd.threshold == 4.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(cd.d[i] >= 0.0);
        CHECK(cd.influential[i] == (cd.d[i] > cd.threshold));
    }
    CHECK(cd.influential[n - 1]);  // the planted outlier is flagged
    const std::size_t argmax = static_cast<std::size_t>(
        std::max_element(cd.d.begin(), cd.d.end()) - cd.d.begin());
    CHECK(argmax == n - 1);

    // oracle: exact refit without each row, distance in the information metric
    double i00 = 0.0, i01 = 0.0, i11 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = f.fitted[i] * (1.0 - f.fitted[i]);
        i00 += w;
        i01 += w * d.x[i];
        i11 += w * d.x[i] * d.x[i];
    }
    std::vector<double> exact(n);
    for (std::size_t i = 0; i < n; ++i) {
        LogisticData loo;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            loo.x.push_back(d.x[j]);
            loo.y.push_back(d.y[j]);
        }
        const LogisticFit g = fit_mle(loo);
        const double d0 = f.beta0 - g.beta0;
        const double d1 = f.beta1 - g.beta1;
        exact[i] = 0.5 * (d0 * d0 * i00 + 2.0 * d0 * d1 * i01 + d1 * d1 * i11);
    }
    CHECK(spearman(cd.d, exact) > 0.8);  // one-step approximation ranks like the truth
}

TEST_CASE("weak-prior posterior means agree with maximum likelihood") {
    Rng rng(5);
    const LogisticData d = bernoulli_sample(rng, 144, -0.4, 0.9);
    const LogisticFit mle = fit_mle(d);

    BayesLogisticConfig cfg;
    cfg.seed = 5;
    const BayesLogisticFit b = fit_bayes(d, cfg);
    CHECK(std::fabs(b.beta0.mean - mle.beta0) < 0.1);
    CHECK(std::fabs(b.beta1.mean - mle.beta1) < 0.1);
    CHECK(b.beta0.rhat < 1.05);
    CHECK(b.beta1.rhat < 1.05);
    CHECK(b.beta0.n_eff > 300.0);
    CHECK(b.beta1.n_eff > 300.0);
    CHECK(b.accept_rate > 0.15);
    CHECK(b.accept_rate < 0.65);
    CHECK(b.chains == 4);
    CHECK(b.retained_per_chain == 5000);
    // quantiles bracket the centre
    CHECK(b.beta1.p10 < b.beta1.p50);
    CHECK(b.beta1.p50 < b.beta1.p90);
    CHECK(b.beta1.mcse == doctest::Approx(b.beta1.sd / std::sqrt(b.beta1.n_eff)));
}

TEST_CASE("tight priors shrink the posterior toward zero") {
    Rng rng(6);
    const LogisticData d = bernoulli_sample(rng, 144, -0.4, 0.9);
    const LogisticFit mle = fit_mle(d);
    BayesLogisticConfig cfg;
    cfg.prior_sd = 0.05;
    cfg.seed = 6;
    const BayesLogisticFit b = fit_bayes(d, cfg);
    CHECK(std::fabs(b.beta1.mean) < 0.1);
    CHECK(std::fabs(b.beta1.mean) < std::fabs(mle.beta1));
}

TEST_CASE("posterior sampler validates its configuration") {
    LogisticData d;
    d.x = {-1.0, 0.0, 1.0, 2.0};
    d.y = {0, 1, 0, 1};
    BayesLogisticConfig cfg;
    cfg.prior_sd = 0.0;
    CHECK_THROWS_AS(fit_bayes(d, cfg), ValidationError);
    cfg.prior_sd = 10.0;
    cfg.chains = 1;
    CHECK_THROWS_AS(fit_bayes(d, cfg), ValidationError);
    cfg.chains = 2;
    cfg.warmup = cfg.iterations;
    CHECK_THROWS_AS(fit_bayes(d, cfg), ValidationError);
}
