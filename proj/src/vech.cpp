#include "hedgekit/vech.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "hedgekit/optimize.hpp"
#include "hedgekit/rng.hpp"

namespace hedgekit {

namespace {
constexpr double kClampPenalty = 1000.0;
constexpr double kInfeasiblePenalty = 1e12;
constexpr double kLog2Pi = 1.8378770664093453;
}  // namespace

void validate_params(const VechParams& p) {
    if (!(p.c_s > 0.0) || !(p.c_f > 0.0)) {
        throw EstimationError("vech params: c_s and c_f must be positive");
    }
    const double neg[] = {p.a_s, p.a_f, p.b_s, p.b_f, p.d_s, p.d_f};
    for (double v : neg) {
        if (v < 0.0) throw EstimationError("vech params: negative ARCH/GARCH/asymmetry term");
    }
    if (p.a_s + p.b_s + 0.5 * p.d_s >= 1.0 || p.a_f + p.b_f + 0.5 * p.d_f >= 1.0) {
        throw EstimationError("vech params: variance recursion violates a + b + d/2 < 1");
    }
}

namespace {

Cov2 residual_covariance(const VechParams& p, std::span<const double> r_s,
                         std::span<const double> r_f) {
    const double n = static_cast<double>(r_s.size());
    Cov2 c;
    for (std::size_t t = 0; t < r_s.size(); ++t) {
        const double es = r_s[t] - p.mu_s;
        const double ef = r_f[t] - p.mu_f;
        c.h_s += es * es;
        c.h_f += ef * ef;
        c.h_sf += es * ef;
    }
    c.h_s /= n;
    c.h_f /= n;
    c.h_sf /= n;
    return c;
}

}  // namespace

MomentPath filter_moments(const VechParams& params, std::span<const double> r_s,
                          std::span<const double> r_f, const FilterOptions& opts) {
    validate_params(params);
    if (r_s.size() != r_f.size() || r_s.empty()) {
        throw EstimationError("filter_moments: spot/futures spans must be equal and non-empty");
    }
    const std::size_t n = r_s.size();

    MomentPath path;
    path.h_s.resize(n);
    path.h_f.resize(n);
    path.h_sf.resize(n);
    path.eps_s.resize(n);
    path.eps_f.resize(n);

    for (std::size_t t = 0; t < n; ++t) {
        path.eps_s[t] = r_s[t] - params.mu_s;
        path.eps_f[t] = r_f[t] - params.mu_f;
    }

    const Cov2 init = opts.init ? *opts.init : residual_covariance(params, r_s, r_f);
    path.h_s[0] = init.h_s;
    path.h_f[0] = init.h_f;
    path.h_sf[0] = init.h_sf;

    for (std::size_t t = 1; t < n; ++t) {
        const double es = path.eps_s[t - 1];
        const double ef = path.eps_f[t - 1];
        bool ind_s = false, ind_f = false;
        if (opts.asymmetric) {
            if (opts.indicator == IndicatorScope::Own) {
                ind_s = es < 0.0;
                ind_f = ef < 0.0;
            } else {
                ind_s = ind_f = es < 0.0 && ef < 0.0;
            }
        }
        path.h_s[t] = params.c_s + params.a_s * es * es + params.b_s * path.h_s[t - 1] +
                      (ind_s ? params.d_s * es * es : 0.0);
        path.h_f[t] = params.c_f + params.a_f * ef * ef + params.b_f * path.h_f[t - 1] +
                      (ind_f ? params.d_f * ef * ef : 0.0);
        path.h_sf[t] = params.c_sf + params.a_sf * es * ef + params.b_sf * path.h_sf[t - 1];

        if (!std::isfinite(path.h_s[t]) || !std::isfinite(path.h_f[t]) ||
            !std::isfinite(path.h_sf[t]) || path.h_s[t] <= 0.0 || path.h_f[t] <= 0.0) {
            throw EstimationError("filter_moments: non-finite or non-positive variance at step " +
                                  std::to_string(t));
        }

        const double bound = opts.corr_cap * std::sqrt(path.h_s[t] * path.h_f[t]);
        if (path.h_sf[t] > bound) {
            path.h_sf[t] = bound;
            ++path.clamp_count;
        } else if (path.h_sf[t] < -bound) {
            path.h_sf[t] = -bound;
            ++path.clamp_count;
        }
    }
    return path;
}

double neg_log_likelihood(const VechParams& params, std::span<const double> r_s,
                          std::span<const double> r_f, const FilterOptions& opts) {
    const MomentPath path = filter_moments(params, r_s, r_f, opts);
    double nll = 0.0;
    for (std::size_t t = 0; t < path.size(); ++t) {
        const double det = path.h_s[t] * path.h_f[t] - path.h_sf[t] * path.h_sf[t];
        if (det <= 0.0) {
            throw EstimationError("neg_log_likelihood: singular H at step " + std::to_string(t));
        }
        const double es = path.eps_s[t];
        const double ef = path.eps_f[t];
        const double quad =
            (path.h_f[t] * es * es - 2.0 * path.h_sf[t] * es * ef + path.h_s[t] * ef * ef) / det;
        nll += kLog2Pi + 0.5 * std::log(det) + 0.5 * quad;
    }
    return nll + kClampPenalty * static_cast<double>(path.clamp_count);
}

HedgeRatioSeries garch_hedge_ratios(const MomentPath& path,
                                    const std::vector<std::string>& dates, ModelId model) {
    if (dates.size() != path.size()) {
        throw EstimationError("garch_hedge_ratios: date/path length mismatch");
    }
    HedgeRatioSeries out;
    out.model = model;
    out.dates = dates;
    out.beta.resize(path.size());
    for (std::size_t t = 0; t < path.size(); ++t) {
        out.beta[t] = path.h_sf[t] / path.h_f[t];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Maximum likelihood
// ---------------------------------------------------------------------------

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Unconstrained reparameterization used by the optimizer:
//   means     : offset in units of the residual standard error
//   c_s, c_f  : log-scale relative to an anchor value
//   c_sf      : tanh angle times sqrt(c_s * c_f)
//   (a, b, d) : total load u = logistic(x) in (0,1), split by a softmax,
//               giving a + b + d/2 = u < 1 and all terms non-negative
// The covariance equation gets the same bounded-sum treatment.
struct Transform {
    bool asymmetric = false;
    double mu0_s = 0.0, mu0_f = 0.0;
    double mu_scale_s = 1.0, mu_scale_f = 1.0;
    double c0_s = 1.0, c0_f = 1.0;

    std::size_t dim() const { return asymmetric ? 13 : 11; }

    VechParams to_params(const std::vector<double>& x) const {
        VechParams p;
        std::size_t i = 0;
        p.mu_s = mu0_s + x[i++] * mu_scale_s;
        p.mu_f = mu0_f + x[i++] * mu_scale_f;
        p.c_s = c0_s * std::exp(x[i++]);
        p.c_f = c0_f * std::exp(x[i++]);
        p.c_sf = std::tanh(x[i++]) * std::sqrt(p.c_s * p.c_f);

        auto own_terms = [&](double& a, double& b, double& d) {
            const double u = logistic(x[i++]);
            if (asymmetric) {
                const double e1 = std::exp(x[i++]);
                const double e2 = std::exp(x[i++]);
                const double denom = e1 + e2 + 1.0;
                a = u * e1 / denom;
                b = u * e2 / denom;
                d = 2.0 * u / denom;
            } else {
                const double share = logistic(x[i++]);
                a = u * share;
                b = u * (1.0 - share);
                d = 0.0;
            }
        };
        own_terms(p.a_s, p.b_s, p.d_s);
        own_terms(p.a_f, p.b_f, p.d_f);

        const double u = logistic(x[i++]);
        const double share = logistic(x[i++]);
        p.a_sf = u * share;
        p.b_sf = u * (1.0 - share);
        return p;
    }

    std::vector<double> from_params(const VechParams& p) const {
        std::vector<double> x;
        x.reserve(dim());
        x.push_back((p.mu_s - mu0_s) / mu_scale_s);
        x.push_back((p.mu_f - mu0_f) / mu_scale_f);
        x.push_back(std::log(p.c_s / c0_s));
        x.push_back(std::log(p.c_f / c0_f));
        x.push_back(std::atanh(std::clamp(p.c_sf / std::sqrt(p.c_s * p.c_f), -0.999, 0.999)));

        auto own_terms = [&](double a, double b, double d) {
            const double u = std::clamp(a + b + 0.5 * d, 1e-6, 1.0 - 1e-6);
            x.push_back(logit(u));
            if (asymmetric) {
                const double w3 = std::max(0.5 * d / u, 1e-6);
                x.push_back(std::log(std::max(a / u, 1e-6) / w3));
                x.push_back(std::log(std::max(b / u, 1e-6) / w3));
            } else {
                x.push_back(logit(std::clamp(a / (a + b), 1e-6, 1.0 - 1e-6)));
            }
        };
        own_terms(p.a_s, p.b_s, p.d_s);
        own_terms(p.a_f, p.b_f, p.d_f);

        const double u = std::clamp(p.a_sf + p.b_sf, 1e-6, 1.0 - 1e-6);
        x.push_back(logit(u));
        x.push_back(logit(std::clamp(p.a_sf / u, 1e-6, 1.0 - 1e-6)));
        return x;
    }
};

VechParams start_params(const Cov2& cov, double mu_s, double mu_f, double a, double b,
                        double d, bool asymmetric) {
    VechParams p;
    p.mu_s = mu_s;
    p.mu_f = mu_f;
    p.a_s = p.a_f = a;
    p.b_s = p.b_f = b;
    p.d_s = p.d_f = asymmetric ? d : 0.0;
    p.a_sf = a;
    p.b_sf = b;
    const double persist_s = 1.0 - p.a_s - p.b_s - 0.5 * p.d_s;
    const double persist_f = 1.0 - p.a_f - p.b_f - 0.5 * p.d_f;
    p.c_s = std::max(cov.h_s * persist_s, 1e-12);
    p.c_f = std::max(cov.h_f * persist_f, 1e-12);
    p.c_sf = cov.h_sf * (1.0 - p.a_sf - p.b_sf);
    return p;
}

}  // namespace

FitResult fit_vech(const ReturnPair& pair, bool asymmetric, const FitOptions& opts) {
    const SampleView view = in_sample(pair);
    if (view.size() < opts.min_observations) {
        throw EstimationError("fit_vech: need at least " +
                              std::to_string(opts.min_observations) +
                              " in-sample observations, have " + std::to_string(view.size()));
    }
    const std::span<const double> r_s(pair.r_s.data() + view.begin, view.size());
    const std::span<const double> r_f(pair.r_f.data() + view.begin, view.size());
    const double n = static_cast<double>(view.size());

    double mean_s = 0.0, mean_f = 0.0;
    for (std::size_t t = 0; t < view.size(); ++t) {
        mean_s += r_s[t];
        mean_f += r_f[t];
    }
    mean_s /= n;
    mean_f /= n;

    VechParams mean_probe;
    mean_probe.mu_s = mean_s;
    mean_probe.mu_f = mean_f;
    const Cov2 cov = residual_covariance(mean_probe, r_s, r_f);
    if (cov.h_s <= 0.0 || cov.h_f <= 0.0) {
        throw EstimationError("fit_vech: constant return series");
    }
    const double corr = cov.h_sf / std::sqrt(cov.h_s * cov.h_f);
    if (std::fabs(corr) > 0.99999) {
        throw EstimationError("fit_vech: spot and futures returns are collinear "
                              "(singular joint distribution)");
    }

    Transform transform;
    transform.asymmetric = asymmetric;
    transform.mu0_s = mean_s;
    transform.mu0_f = mean_f;
    transform.mu_scale_s = std::sqrt(cov.h_s / n);
    transform.mu_scale_f = std::sqrt(cov.h_f / n);
    transform.c0_s = cov.h_s * 0.05;
    transform.c0_f = cov.h_f * 0.05;

    FilterOptions fopts;
    fopts.asymmetric = asymmetric;
    fopts.indicator = opts.indicator;

    const auto objective = [&](const std::vector<double>& x) -> double {
        for (double v : x) {
            if (!std::isfinite(v) || std::fabs(v) > 50.0) return kInfeasiblePenalty;
        }
        try {
            return neg_log_likelihood(transform.to_params(x), r_s, r_f, fopts);
        } catch (const EstimationError&) {
            return kInfeasiblePenalty;
        }
    };

    // Deterministic multi-start over the persistence profile.
    const struct { double a, b, d; } starts[] = {
        {0.05, 0.90, 0.02},
        {0.10, 0.80, 0.05},
        {0.03, 0.60, 0.10},
    };

    FitResult best;
    best.nll = kInfeasiblePenalty;
    bool have_best = false;

    optimize::Options nm_opts;
    nm_opts.tolerance = opts.tolerance;
    nm_opts.max_iterations = opts.max_iterations;
    optimize::Options bfgs_opts;
    bfgs_opts.tolerance = opts.tolerance;
    bfgs_opts.max_iterations = 300;

    for (const auto& s : starts) {
        const VechParams p0 = start_params(cov, mean_s, mean_f, s.a, s.b, s.d, asymmetric);
        const std::vector<double> x0 = transform.from_params(p0);
        const double f0 = objective(x0);

        auto nm = optimize::nelder_mead(objective, x0, 0.25, nm_opts);
        auto polish = optimize::bfgs(objective, nm.x, bfgs_opts);
        const auto& winner = polish.value < nm.value ? polish : nm;

        if (!have_best || winner.value < best.nll) {
            have_best = true;
            best.params = transform.to_params(winner.x);
            best.nll = winner.value;
            best.initial_nll = f0;
            best.iterations = nm.iterations + polish.iterations;
            best.converged = nm.converged || polish.converged;
        }
    }

    if (!have_best || best.nll >= kInfeasiblePenalty) {
        throw EstimationError("fit_vech: likelihood evaluation failed from every start");
    }
    if (!best.converged) {
        throw FitError("fit_vech: optimizer failed to converge after " +
                           std::to_string(best.iterations) + " iterations (best nll " +
                           std::to_string(best.nll) + ")",
                       best);
    }
    best.clamp_count = filter_moments(best.params, r_s, r_f, fopts).clamp_count;
    return best;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> sequential_dates(const std::string& start, std::size_t n) {
    int y = 2000, m = 1, d = 3;
    std::sscanf(start.c_str(), "%d-%d-%d", &y, &m, &d);
    std::chrono::sys_days day =
        std::chrono::year_month_day(std::chrono::year(y), std::chrono::month(unsigned(m)),
                                    std::chrono::day(unsigned(d)));
    std::vector<std::string> out;
    out.reserve(n);
    char buf[16];
    for (std::size_t i = 0; i < n; ++i) {
        const std::chrono::year_month_day ymd(day);
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                      unsigned(ymd.month()), unsigned(ymd.day()));
        out.emplace_back(buf);
        day += std::chrono::days(1);
    }
    return out;
}

}  // namespace

ReturnPair simulate_vech(const VechParams& params, std::size_t n, std::uint64_t seed,
                         const SimOptions& opts) {
    validate_params(params);
    if (n == 0) throw EstimationError("simulate_vech: n must be positive");

    rng::Generator gen(seed);
    rng::NegSkewMixture mixture;

    const bool asymmetric = params.d_s > 0.0 || params.d_f > 0.0;

    // Unconditional moments as the starting state. With symmetric innovations
    // E[eps^2 I] = H/2, so d contributes d/2 to persistence.
    Cov2 h;
    h.h_s = params.c_s / (1.0 - params.a_s - params.b_s - 0.5 * params.d_s);
    h.h_f = params.c_f / (1.0 - params.a_f - params.b_f - 0.5 * params.d_f);
    const double sf_persist = 1.0 - params.a_sf - params.b_sf;
    h.h_sf = sf_persist > 1e-8 ? params.c_sf / sf_persist : params.c_sf;
    const double cap0 = 0.9999 * std::sqrt(h.h_s * h.h_f);
    h.h_sf = std::clamp(h.h_sf, -cap0, cap0);

    ReturnPair pair;
    pair.dates = sequential_dates(opts.start_date, n);
    pair.r_s.reserve(n);
    pair.r_f.reserve(n);

    double eps_s = 0.0, eps_f = 0.0;
    const std::size_t total = opts.burn_in + n;
    for (std::size_t t = 0; t < total; ++t) {
        if (t > 0) {
            bool ind_s = false, ind_f = false;
            if (asymmetric) {
                ind_s = eps_s < 0.0;
                ind_f = eps_f < 0.0;
            }
            Cov2 next;
            next.h_s = params.c_s + params.a_s * eps_s * eps_s + params.b_s * h.h_s +
                       (ind_s ? params.d_s * eps_s * eps_s : 0.0);
            next.h_f = params.c_f + params.a_f * eps_f * eps_f + params.b_f * h.h_f +
                       (ind_f ? params.d_f * eps_f * eps_f : 0.0);
            next.h_sf = params.c_sf + params.a_sf * eps_s * eps_f + params.b_sf * h.h_sf;
            const double cap = 0.9999 * std::sqrt(next.h_s * next.h_f);
            next.h_sf = std::clamp(next.h_sf, -cap, cap);
            h = next;
        }

        // Cholesky with the futures leg first, so the skew option lands in
        // the spot-specific component (and therefore in the hedged residual).
        const double z_f = gen.next_normal();
        const double z_s = opts.spot == SpotInnovation::NegSkewMixture
                               ? mixture.draw(gen)
                               : gen.next_normal();
        const double sd_f = std::sqrt(h.h_f);
        eps_f = sd_f * z_f;
        const double load = h.h_sf / sd_f;
        const double resid_var = std::max(h.h_s - load * load, 1e-16);
        eps_s = load * z_f + std::sqrt(resid_var) * z_s;

        if (t >= opts.burn_in) {
            pair.r_s.push_back(params.mu_s + eps_s);
            pair.r_f.push_back(params.mu_f + eps_f);
        }
    }
    pair.n_in = n;
    pair.n_out = 0;
    return pair;
}

}  // namespace hedgekit
