// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ideal {

struct LogisticData {
    std::vector<double> x;
    std::vector<int> y;  // 0/1

    std::size_t size() const { return x.size(); }
    void validate() const;
};

struct LogisticFit {
    double beta0 = 0.0, beta1 = 0.0;
    double se0 = 0.0, se1 = 0.0;
    double z0 = 0.0, z1 = 0.0;
    double p0 = 1.0, p1 = 1.0;
    double null_deviance = 0.0;
    double residual_deviance = 0.0;
    double aic = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> fitted;    // per-row success probabilities
    std::vector<double> leverage;  // hat diagonal of the weighted design
    LogisticData data;             // kept for downstream diagnostics
};

// Newton / IRLS maximum likelihood for logit(p) = beta0 + beta1 x.
LogisticFit fit_mle(const LogisticData& data);

struct LrtResult {
    double statistic = 0.0;
    int df = 1;
    double p = 1.0;
};

// Null-vs-fitted deviance drop against chi-square(1).
LrtResult lrt_chisq(const LogisticFit& fit);

struct OddsRatios {
    double intercept = 1.0;
    double slope = 1.0;
};

OddsRatios odds_ratio(const LogisticFit& fit);

struct RocResult {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), (0,0) to (1,1)
    double auc = 0.5;
};

RocResult roc_auc(const LogisticFit& fit);

struct BoxTidwellResult {
    double statistic = 0.0;  // Wald z of the x*ln(x) augmentation term
    double p = 1.0;
    double shift = 0.0;  // applied to make the predictor strictly positive
};

// Linearity-on-the-logit check: augment with z = x~*ln(x~), x~ = x-min(x)+1.
BoxTidwellResult box_tidwell(const LogisticData& data);

struct CooksResult {
    std::vector<double> d;
    std::vector<bool> influential;  // d > 4/n
    double threshold = 0.0;
};

// One-step GLM Cook's distances from IRLS leverages.
CooksResult cooks_distance(const LogisticFit& fit);

struct BayesParamSummary {
    double mean = 0.0, sd = 0.0;
    double p10 = 0.0, p50 = 0.0, p90 = 0.0;
    double mcse = 0.0, rhat = 0.0, n_eff = 0.0;
};

struct BayesLogisticFit {
    BayesParamSummary beta0, beta1;
    double accept_rate = 0.0;
    int chains = 0;
    long long retained_per_chain = 0;
};

struct BayesLogisticConfig {
    double prior_sd = 10.0;  // N(0, prior_sd^2) on both coefficients
    long long iterations = 6000;
    long long warmup = 1000;
    int chains = 4;
    std::uint64_t seed = 1;
};

// Random-walk Metropolis on (beta0, beta1), proposals preconditioned by the
// MLE covariance, adapted during warmup only.
BayesLogisticFit fit_bayes(const LogisticData& data, const BayesLogisticConfig& config);

}  // namespace ideal
