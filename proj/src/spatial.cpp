// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/spatial.hpp"

#include <cmath>

#include "ideal/errors.hpp"
#include "ideal/mathutil.hpp"

namespace ideal {

const char* link_name(Link link) { return link == Link::Logit ? "logit" : "probit"; }

Link parse_link(const std::string& s) {
    if (s == "logit") return Link::Logit;
    if (s == "probit") return Link::Probit;
    throw ValidationError("unknown link '" + s + "' (expected logit or probit)");
}

double link_eval(Link link, double x) {
    return link == Link::Logit ? logistic_cdf(x) : norm_cdf(x);
}

double cell_log_prob(Link link, double x, int y) {
    const double s = y == 1 ? x : -x;
    if (link == Link::Logit) return -softplus(-s);
    return log_norm_cdf(s);
}

double cell_dlog_prob(Link link, double x, int y) {
    if (link == Link::Logit) return static_cast<double>(y) - logistic_cdf(x);
    // probit: y=1 gives the Mills ratio at x, y=0 its mirrored negative
    return y == 1 ? inverse_mills(x) : -inverse_mills(-x);
}

ItemPair reparameterize(double p, double q, double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("reparameterize: sigma must be > 0");
    return {(q * q - p * p) / sigma, 2.0 * (p - q) / sigma};
}

IdealPoints anchored_points(const Roster& roster) {
    IdealPoints pts;
    pts.beta.assign(roster.size(), 0.0);
    pts.anchored.assign(roster.size(), false);
    std::size_t count = 0;
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (roster[i].anchor) {
            pts.beta[i] = *roster[i].anchor;
            pts.anchored[i] = true;
            ++count;
        }
    }
    if (count != 2)
        throw ValidationError("model requires exactly 2 anchored legislators, found " +
                              std::to_string(count));
    return pts;
}

void PriorSpec::validate() const {
    if (!(A0 > 0.0)) throw ValidationError("prior variance A0 must be > 0");
    if (!(B > 0.0)) throw ValidationError("prior variance B must be > 0");
}

namespace {

void check_finite(const ItemParams& items, const IdealPoints& points) {
    for (std::size_t j = 0; j < items.size(); ++j)
        if (!std::isfinite(items.mu[j]) || !std::isfinite(items.alpha[j]))
            throw NumericError("non-finite item parameter at list index " + std::to_string(j));
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!std::isfinite(points.beta[i]))
            throw NumericError("non-finite ideal point at row index " + std::to_string(i));
}

}  // namespace

double log_likelihood(const ModelView& view, const ItemParams& items,
                      const IdealPoints& points, Link link) {
    if (items.size() != view.m || points.size() != view.n)
        throw ValidationError("parameter dimensions do not match vote matrix");
    check_finite(items, points);
    KahanSum acc;
    for (std::size_t i = 0; i < view.n; ++i) {
        const double b = points.beta[i];
        const std::int8_t* row = view.y.data() + i * view.m;
        for (std::size_t j = 0; j < view.m; ++j) {
            if (row[j] < 0) continue;
            acc.add(cell_log_prob(link, items.mu[j] + items.alpha[j] * b, row[j]));
        }
    }
    return acc.value();
}

double log_prior(const ItemParams& items, const IdealPoints& points,
                 const PriorSpec& priors) {
    priors.validate();
    check_finite(items, points);
    const double item_norm = -0.5 * (kLogTwoPi + std::log(priors.A0));
    const double beta_norm = -0.5 * (kLogTwoPi + std::log(priors.B));
    KahanSum acc;
    for (std::size_t j = 0; j < items.size(); ++j) {
        const double dm = items.mu[j] - priors.alpha0;
        const double da = items.alpha[j] - priors.alpha0;
        acc.add(item_norm - 0.5 * dm * dm / priors.A0);
        acc.add(item_norm - 0.5 * da * da / priors.A0);
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points.anchored[i]) continue;
        const double db = points.beta[i] - priors.b;
        acc.add(beta_norm - 0.5 * db * db / priors.B);
    }
    return acc.value();
}

double log_posterior(const ModelView& view, const ItemParams& items,
                     const IdealPoints& points, const PriorSpec& priors, Link link) {
    return log_prior(items, points, priors) + log_likelihood(view, items, points, link);
}

PosteriorGradient log_posterior_gradient(const ModelView& view, const ItemParams& items,
                                         const IdealPoints& points, const PriorSpec& priors,
                                         Link link) {
    if (items.size() != view.m || points.size() != view.n)
        throw ValidationError("parameter dimensions do not match vote matrix");
    priors.validate();
    check_finite(items, points);

    PosteriorGradient g;
    g.mu.assign(view.m, 0.0);
    g.alpha.assign(view.m, 0.0);
    g.beta.assign(view.n, 0.0);

    for (std::size_t j = 0; j < view.m; ++j) {
        g.mu[j] = -(items.mu[j] - priors.alpha0) / priors.A0;
        g.alpha[j] = -(items.alpha[j] - priors.alpha0) / priors.A0;
    }
    for (std::size_t i = 0; i < view.n; ++i)
        if (!points.anchored[i]) g.beta[i] = -(points.beta[i] - priors.b) / priors.B;

    for (std::size_t i = 0; i < view.n; ++i) {
        const double b = points.beta[i];
        const std::int8_t* row = view.y.data() + i * view.m;
        for (std::size_t j = 0; j < view.m; ++j) {
            if (row[j] < 0) continue;
            const double d = cell_dlog_prob(link, items.mu[j] + items.alpha[j] * b, row[j]);
            g.mu[j] += d;
            g.alpha[j] += d * b;
            if (!points.anchored[i]) g.beta[i] += d * items.alpha[j];
        }
    }
    return g;
}

}  // namespace ideal
