// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ideal/csv.hpp"
#include "ideal/errors.hpp"
#include "ideal/mathutil.hpp"
#include "ideal/rng.hpp"

namespace ideal {

void SyntheticSpec::validate() const {
    if (n < 3) throw ValidationError("synthetic spec needs n >= 3");
    if (m < 1) throw ValidationError("synthetic spec needs m >= 1");
    if (missing_rate < 0.0 || missing_rate > 0.95)
        throw ValidationError("missing_rate must be in [0, 0.95]");
    if (!(beta_sd >= 0.0 && mu_sd >= 0.0 && alpha_sd >= 0.0))
        throw ValidationError("truth standard deviations must be >= 0");
}

namespace {

std::string make_id(std::size_t i, std::size_t n) {
    std::size_t width = 1, v = n;
    while (v >= 10) {
        v /= 10;
        ++width;
    }
    std::string num = std::to_string(i + 1);
    return "L" + std::string(width > num.size() ? width - num.size() : 0, '0') + num;
}

}  // namespace

SyntheticInstance generate(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    SyntheticInstance inst;
    inst.truth.beta.resize(spec.n);
    inst.truth.beta[0] = -1.0;
    inst.truth.beta[1] = 1.0;
    for (std::size_t i = 2; i < spec.n; ++i)
        inst.truth.beta[i] = rng.normal(spec.beta_mean, spec.beta_sd);

    inst.truth.mu.resize(spec.m);
    inst.truth.alpha.resize(spec.m);
    for (std::size_t j = 0; j < spec.m; ++j) {
        inst.truth.mu[j] = rng.normal(spec.mu_mean, spec.mu_sd);
        inst.truth.alpha[j] = rng.normal(spec.alpha_mean, spec.alpha_sd);
    }

    inst.matrix.n = spec.n;
    inst.matrix.m = spec.m;
    for (std::size_t j = 0; j < spec.m; ++j)
        inst.matrix.list_ids.push_back("V" + std::to_string(j + 1));
    inst.matrix.cells.resize(spec.n * spec.m);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < spec.m; ++j) {
            const double p =
                link_eval(spec.link, inst.truth.mu[j] + inst.truth.alpha[j] * inst.truth.beta[i]);
            inst.matrix.at(i, j) = rng.uniform() < p ? Vote::Yes : Vote::No;
        }
    }
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < spec.m; ++j) {
            if (rng.uniform() >= spec.missing_rate) continue;
            const double u = rng.uniform();
            inst.matrix.at(i, j) =
                u < 1.0 / 3.0 ? Vote::Abstain : (u < 2.0 / 3.0 ? Vote::Absent : Vote::NotListed);
        }
    }

    for (std::size_t i = 0; i < spec.n; ++i) {
        LegislatorMeta lm;
        lm.id = make_id(i, spec.n);
        lm.name = "Legislator " + std::to_string(i + 1);
        const double b = inst.truth.beta[i];
        if (i == 0) lm.anchor = -1.0;
        if (i == 1) lm.anchor = 1.0;
        if (b > 0.3) {
            lm.bloc = Bloc::Coalition;
            lm.party = i % 2 == 0 ? "PC1" : "PC2";
        } else if (b < -0.3) {
            lm.bloc = Bloc::Opposition;
            lm.party = i % 2 == 0 ? "PO1" : "PO2";
        } else if (i % 2 == 0) {
            lm.bloc = Bloc::Independent;
            lm.party = "PIN";
        } else {
            lm.bloc = Bloc::Minority;
            lm.party = "PMI";
        }
        lm.attribute_flag =
            rng.uniform() < link_eval(Link::Logit, spec.attr_intercept + spec.attr_slope * b);
        inst.matrix.legislator_ids.push_back(lm.id);
        inst.roster.push_back(std::move(lm));
    }
    return inst;
}

void write_truth_csv(const std::string& path, const SyntheticInstance& inst) {
    CsvWriter w(path);
    w.row({"param", "id", "value"});
    for (std::size_t i = 0; i < inst.roster.size(); ++i)
        w.row({"beta", inst.roster[i].id, fmt_num(inst.truth.beta[i])});
    for (std::size_t j = 0; j < inst.matrix.m; ++j)
        w.row({"mu", inst.matrix.list_ids[j], fmt_num(inst.truth.mu[j])});
    for (std::size_t j = 0; j < inst.matrix.m; ++j)
        w.row({"alpha", inst.matrix.list_ids[j], fmt_num(inst.truth.alpha[j])});
    w.close();
}

SyntheticInstance tiny_instance() {
    SyntheticInstance inst;
    inst.matrix.n = 3;
    inst.matrix.m = 2;
    inst.matrix.legislator_ids = {"T01", "T02", "T03"};
    inst.matrix.list_ids = {"V1", "V2"};
    inst.matrix.cells = {
        Vote::No,  Vote::No,   // T01, anchored at -1
        Vote::Yes, Vote::Yes,  // T02, anchored at +1
        Vote::Yes, Vote::No,   // T03, free
    };

    LegislatorMeta a{"T01", "Tiny One", "PO1", Bloc::Opposition, true, -1.0};
    LegislatorMeta b{"T02", "Tiny Two", "PC1", Bloc::Coalition, false, 1.0};
    LegislatorMeta c{"T03", "Tiny Three", "PIN", Bloc::Independent, true, std::nullopt};
    inst.roster = {a, b, c};

    inst.truth.beta = {-1.0, 1.0, 0.0};
    inst.truth.mu = {0.0, 0.0};
    inst.truth.alpha = {1.0, 1.0};
    return inst;
}

PriorSpec tiny_instance_priors() {
    PriorSpec p;
    p.alpha0 = 0.0;
    p.A0 = 2.25;  // narrow enough that the quadrature box holds the mass
    p.b = 0.0;
    p.B = 1.0;
    return p;
}

QuadratureResult quadrature_posterior(const ModelView& view, const Roster& roster,
                                      const PriorSpec& priors, Link link, int grid_points,
                                      double lo, double hi) {
    priors.validate();
    if (grid_points < 5) throw ValidationError("quadrature needs >= 5 grid points");
    if (!(hi > lo)) throw ValidationError("quadrature needs hi > lo");
    if (roster.size() != view.n)
        throw ValidationError("roster size does not match vote matrix rows");

    const IdealPoints anchors = anchored_points(roster);
    std::vector<std::size_t> free_rows;
    for (std::size_t i = 0; i < view.n; ++i)
        if (!anchors.anchored[i]) free_rows.push_back(i);
    const std::size_t n_free = free_rows.size();
    const std::size_t p_count = 2 * view.m + n_free;
    if (p_count > 5)
        throw ValidationError("quadrature oracle limited to 5 free parameters, got " +
                              std::to_string(p_count));

    const std::size_t g = static_cast<std::size_t>(grid_points);
    std::vector<double> grid(g);
    for (std::size_t k = 0; k < g; ++k)
        grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(g - 1);

    std::size_t combos = 1;
    for (std::size_t f = 0; f < n_free; ++f) combos *= g;

    // column-j observed cells as (row, y)
    std::vector<std::vector<std::pair<std::size_t, int>>> by_col(view.m);
    for (std::size_t i = 0; i < view.n; ++i)
        for (std::size_t j = 0; j < view.m; ++j)
            if (view.observed(i, j)) by_col[j].emplace_back(i, view.at(i, j));

    // per combo: log column-normalizers, conditional item moments
    std::vector<double> wlog(combos, 0.0);
    std::vector<double> m_mu(combos * view.m), m_mu2(combos * view.m);
    std::vector<double> m_al(combos * view.m), m_al2(combos * view.m);

    std::vector<double> beta(view.n);
    for (std::size_t i = 0; i < view.n; ++i) beta[i] = anchors.beta[i];

    std::vector<double> block(g * g);
    std::vector<std::size_t> odo(n_free, 0);

    for (std::size_t c = 0; c < combos; ++c) {
        for (std::size_t f = 0; f < n_free; ++f) beta[free_rows[f]] = grid[odo[f]];

        double combo_log = 0.0;
        for (std::size_t f = 0; f < n_free; ++f) {
            const double d = beta[free_rows[f]] - priors.b;
            combo_log += -0.5 * d * d / priors.B;
        }

        for (std::size_t j = 0; j < view.m; ++j) {
            double blockmax = -1e300;
            for (std::size_t a = 0; a < g; ++a) {
                const double mu = grid[a];
                const double dpm = mu - priors.alpha0;
                const double mu_pr = -0.5 * dpm * dpm / priors.A0;
                for (std::size_t bb = 0; bb < g; ++bb) {
                    const double al = grid[bb];
                    const double dpa = al - priors.alpha0;
                    double lp = mu_pr - 0.5 * dpa * dpa / priors.A0;
                    for (const auto& [i, y] : by_col[j])
                        lp += cell_log_prob(link, mu + al * beta[i], y);
                    block[a * g + bb] = lp;
                    if (lp > blockmax) blockmax = lp;
                }
            }
            KahanSum z, smu, smu2, sal, sal2;
            for (std::size_t a = 0; a < g; ++a)
                for (std::size_t bb = 0; bb < g; ++bb) {
                    const double w = std::exp(block[a * g + bb] - blockmax);
                    z.add(w);
                    smu.add(w * grid[a]);
                    smu2.add(w * grid[a] * grid[a]);
                    sal.add(w * grid[bb]);
                    sal2.add(w * grid[bb] * grid[bb]);
                }
            const std::size_t off = c * view.m + j;
            m_mu[off] = smu.value() / z.value();
            m_mu2[off] = smu2.value() / z.value();
            m_al[off] = sal.value() / z.value();
            m_al2[off] = sal2.value() / z.value();
            combo_log += blockmax + std::log(z.value());
        }
        wlog[c] = combo_log;

        for (std::size_t f = 0; f < n_free; ++f) {
            if (++odo[f] < g) break;
            odo[f] = 0;
        }
    }

    const double wmax = *std::max_element(wlog.begin(), wlog.end());
    KahanSum zsum;
    std::vector<double> u(combos);
    for (std::size_t c = 0; c < combos; ++c) {
        u[c] = std::exp(wlog[c] - wmax);
        zsum.add(u[c]);
    }
    const double z = zsum.value();
    for (std::size_t c = 0; c < combos; ++c) u[c] /= z;

    QuadratureResult out;
    out.grid_points = grid_points;
    out.lo = lo;
    out.hi = hi;

    for (std::size_t j = 0; j < view.m; ++j) {
        KahanSum e1, e2;
        for (std::size_t c = 0; c < combos; ++c) {
            e1.add(u[c] * m_mu[c * view.m + j]);
            e2.add(u[c] * m_mu2[c * view.m + j]);
        }
        out.names.push_back("mu_" + std::to_string(j + 1));
        out.mean.push_back(e1.value());
        out.sd.push_back(std::sqrt(std::max(e2.value() - e1.value() * e1.value(), 0.0)));
    }
    for (std::size_t j = 0; j < view.m; ++j) {
        KahanSum e1, e2;
        for (std::size_t c = 0; c < combos; ++c) {
            e1.add(u[c] * m_al[c * view.m + j]);
            e2.add(u[c] * m_al2[c * view.m + j]);
        }
        out.names.push_back("alpha_" + std::to_string(j + 1));
        out.mean.push_back(e1.value());
        out.sd.push_back(std::sqrt(std::max(e2.value() - e1.value() * e1.value(), 0.0)));
    }
    for (std::size_t f = 0; f < n_free; ++f) {
        KahanSum e1, e2;
        std::size_t stride = 1;
        for (std::size_t ff = 0; ff < f; ++ff) stride *= g;
        for (std::size_t c = 0; c < combos; ++c) {
            const double bval = grid[(c / stride) % g];
            e1.add(u[c] * bval);
            e2.add(u[c] * bval * bval);
        }
        out.names.push_back("beta_" + roster[free_rows[f]].id);
        out.mean.push_back(e1.value());
        out.sd.push_back(std::sqrt(std::max(e2.value() - e1.value() * e1.value(), 0.0)));
    }
    return out;
}

std::vector<SensitivityRow> missing_sensitivity(const SyntheticSpec& spec,
                                                const std::vector<double>& extra_rates,
                                                const McmcConfig& mcmc,
                                                const PriorSpec& priors) {
    const SyntheticInstance base = generate(spec);

    std::map<std::string, double> truth_by_id;
    for (std::size_t i = 0; i < base.roster.size(); ++i)
        truth_by_id[base.roster[i].id] = base.truth.beta[i];

    auto fit_means = [&](const VoteMatrix& matrix,
                         const Roster& roster) -> std::map<std::string, double> {
        const FilterResult fr = filter_for_model(matrix, roster);
        const ModelView view = encode_for_model(fr.matrix);
        const PosteriorDraws draws = run(mcmc, view, fr.roster, priors, spec.link);
        std::map<std::string, double> means;
        for (std::size_t k = 0; k < draws.free_rows.size(); ++k) {
            const std::size_t col = draws.beta_col(k);
            means[fr.roster[draws.free_rows[k]].id] = mean_of(draws.pooled(col));
        }
        return means;
    };

    const auto base_means = fit_means(base.matrix, base.roster);

    std::vector<SensitivityRow> rows;
    for (std::size_t r = 0; r < extra_rates.size(); ++r) {
        const double rate = extra_rates[r];
        if (rate < 0.0 || rate >= 1.0)
            throw ValidationError("extra missing rate must be in [0, 1)");

        VoteMatrix masked = base.matrix;
        Rng mrng(spec.seed + 1000003ULL * (r + 1));
        if (rate > 0.0) {
            for (auto& cell : masked.cells)
                if ((cell == Vote::Yes || cell == Vote::No) && mrng.uniform() < rate)
                    cell = Vote::Absent;
        }
        const auto means = fit_means(masked, base.roster);

        SensitivityRow row;
        row.extra_rate = rate;
        std::vector<double> va, vb, vt;
        for (const auto& [id, mb] : means) {
            auto it = base_means.find(id);
            if (it == base_means.end()) continue;
            va.push_back(it->second);
            vb.push_back(mb);
            vt.push_back(truth_by_id.at(id));
        }
        row.retained_legislators = va.size();
        row.pearson_vs_base = pearson(vb, va);
        row.spearman_vs_base = spearman(vb, va);
        row.pearson_vs_truth = pearson(vb, vt);
        row.spearman_vs_truth = spearman(vb, vt);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ideal
