// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <vector>

#include "ideal/rollcall.hpp"

namespace ideal {

enum class Link { Logit, Probit };

const char* link_name(Link link);
Link parse_link(const std::string& s);

// Response probability G(x): logistic CDF or standard normal CDF.
double link_eval(Link link, double x);

// log p(y | x) for one cell, stable for |x| up to a few hundred.
double cell_log_prob(Link link, double x, int y);

// d/dx log p(y | x) for one cell.
double cell_dlog_prob(Link link, double x, int y);

// One-dimensional item parameters, one pair per vote list.
struct ItemParams {
    std::vector<double> mu;
    std::vector<double> alpha;

    std::size_t size() const { return mu.size(); }
};

// Recover (mu, alpha) from the alternatives' positions p ("yes") and q
// ("no") and the item noise scale: mu=(q^2-p^2)/sigma, alpha=2(p-q)/sigma.
struct ItemPair {
    double mu;
    double alpha;
};
ItemPair reparameterize(double p, double q, double sigma);

// Legislator positions; anchored entries are constants, not parameters.
struct IdealPoints {
    std::vector<double> beta;
    std::vector<bool> anchored;

    std::size_t size() const { return beta.size(); }
    std::size_t free_count() const {
        std::size_t c = 0;
        for (bool a : anchored)
            if (!a) ++c;
        return c;
    }
};

// Builds the anchor mask from roster pins; requires exactly two.
IdealPoints anchored_points(const Roster& roster);

struct PriorSpec {
    double alpha0 = 0.0;  // mean of each (mu, alpha) coordinate
    double A0 = 25.0;     // variance of each (mu, alpha) coordinate
    double b = 0.0;       // mean of free beta
    double B = 1.0;       // variance of free beta

    void validate() const;
};

double log_likelihood(const ModelView& view, const ItemParams& items,
                      const IdealPoints& points, Link link);

double log_prior(const ItemParams& items, const IdealPoints& points,
                 const PriorSpec& priors);

double log_posterior(const ModelView& view, const ItemParams& items,
                     const IdealPoints& points, const PriorSpec& priors, Link link);

// Gradient of log_posterior in each free coordinate; anchored beta slots
// are returned as zero.
struct PosteriorGradient {
    std::vector<double> mu;
    std::vector<double> alpha;
    std::vector<double> beta;
};

PosteriorGradient log_posterior_gradient(const ModelView& view, const ItemParams& items,
                                         const IdealPoints& points, const PriorSpec& priors,
                                         Link link);

}  // namespace ideal
