#include "hedgekit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hedgekit {

namespace {

// Solves the normal equations X'X b = X'y by Gaussian elimination with
// partial pivoting; returns R^2 of the fit and, optionally, the coefficient
// standard errors. Small systems only (LM/ADF regressions).
struct OlsResult {
    std::vector<double> coef;
    std::vector<double> se;
    double r_squared = 0.0;
};

OlsResult ols_regress(const std::vector<std::vector<double>>& X,
                      const std::vector<double>& y) {
    const std::size_t n = y.size();
    const std::size_t k = X.size();
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < n; ++t) s += X[i][t] * X[j][t];
            xtx[i][j] = xtx[j][i] = s;
        }
        double s = 0.0;
        for (std::size_t t = 0; t < n; ++t) s += X[i][t] * y[t];
        xty[i] = s;
    }

    // Augment with the identity to get (X'X)^-1 for standard errors.
    std::vector<std::vector<double>> aug(k, std::vector<double>(2 * k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug[i][j] = xtx[i][j];
        aug[i][k + i] = 1.0;
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::fabs(aug[r][col]) > std::fabs(aug[pivot][col])) pivot = r;
        }
        if (std::fabs(aug[pivot][col]) < 1e-300) {
            throw StatsError("ols_regress: degenerate regressor matrix");
        }
        std::swap(aug[col], aug[pivot]);
        const double d = aug[col][col];
        for (auto& v : aug[col]) v /= d;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = aug[r][col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < 2 * k; ++c) aug[r][c] -= f * aug[col][c];
        }
    }

    OlsResult res;
    res.coef.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) res.coef[i] += aug[i][k + j] * xty[j];
    }

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double fit = 0.0;
        for (std::size_t i = 0; i < k; ++i) fit += res.coef[i] * X[i][t];
        ss_res += (y[t] - fit) * (y[t] - fit);
        ss_tot += (y[t] - ybar) * (y[t] - ybar);
    }
    if (ss_tot <= 0.0) {
        throw StatsError("ols_regress: constant dependent variable");
    }
    res.r_squared = 1.0 - ss_res / ss_tot;

    const double sigma2 = ss_res / static_cast<double>(n - k);
    res.se.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        res.se[i] = std::sqrt(std::max(0.0, sigma2 * aug[i][k + i]));
    }
    return res;
}

}  // namespace

double sample_mean(std::span<const double> x) {
    if (x.empty()) throw StatsError("sample_mean: empty series");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw StatsError("sample_variance: need at least 2 observations");
    const double m = sample_mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

namespace {
double central_moment_ratio(std::span<const double> x, int order) {
    const double m = sample_mean(x);
    const double n = static_cast<double>(x.size());
    double m2 = 0.0, mk = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        mk += std::pow(d, order);
    }
    m2 /= n;
    mk /= n;
    if (m2 <= 0.0) {
        throw StatsError("shape statistic undefined for constant series");
    }
    return mk / std::pow(m2, order / 2.0);
}
}  // namespace

double sample_skewness(std::span<const double> x) {
    return central_moment_ratio(x, 3);
}

double sample_excess_kurtosis(std::span<const double> x) {
    return central_moment_ratio(x, 4) - 3.0;
}

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw StatsError("gamma_p: invalid arguments");
    if (x == 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // series representation
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // continued fraction for Q, then P = 1 - Q
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - gln) * h;
    return 1.0 - q;
}

double chi2_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    return gamma_p(df / 2.0, x / 2.0);
}

double chi2_critical(double df, double alpha) {
    // bisection on the CDF
    double lo = 0.0, hi = df + 200.0 * std::sqrt(df) + 200.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(mid, df) < 1.0 - alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

TestStat lm_arch(std::span<const double> returns, std::size_t lags) {
    if (lags == 0) throw StatsError("lm_arch: lags must be positive");
    if (returns.size() <= lags + 10) {
        throw StatsError("lm_arch: series too short for requested lags");
    }
    const double m = sample_mean(returns);
    std::vector<double> u2(returns.size());
    for (std::size_t t = 0; t < returns.size(); ++t) {
        const double d = returns[t] - m;
        u2[t] = d * d;
    }

    const std::size_t n = returns.size() - lags;
    std::vector<std::vector<double>> X(lags + 1, std::vector<double>(n));
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        X[0][t] = 1.0;
        for (std::size_t j = 1; j <= lags; ++j) X[j][t] = u2[lags + t - j];
        y[t] = u2[lags + t];
    }
    const auto fit = ols_regress(X, y);

    TestStat out;
    out.statistic = static_cast<double>(n) * fit.r_squared;
    out.reject_1pct = out.statistic > chi2_critical(static_cast<double>(lags), 0.01);
    out.reject_5pct = out.statistic > chi2_critical(static_cast<double>(lags), 0.05);
    return out;
}

TestStat adf_test(std::span<const double> series, std::size_t lags) {
    if (series.size() <= lags + 15) {
        throw StatsError("adf_test: series too short");
    }
    const std::size_t total = series.size();
    std::vector<double> dy(total - 1);
    for (std::size_t t = 1; t < total; ++t) dy[t - 1] = series[t] - series[t - 1];

    const std::size_t start = lags;  // first usable index into dy
    const std::size_t n = dy.size() - start;
    std::vector<std::vector<double>> X(2 + lags, std::vector<double>(n));
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        X[0][t] = 1.0;
        X[1][t] = series[start + t];  // y_{t-1}
        for (std::size_t j = 1; j <= lags; ++j) X[1 + j][t] = dy[start + t - j];
        y[t] = dy[start + t];
    }
    const auto fit = ols_regress(X, y);
    if (fit.se[1] <= 0.0) {
        throw StatsError("adf_test: degenerate regression variance");
    }

    TestStat out;
    out.statistic = fit.coef[1] / fit.se[1];
    // Asymptotic critical values, constant-only case.
    out.reject_1pct = out.statistic < -3.43;
    out.reject_5pct = out.statistic < -2.86;
    return out;
}

SummaryStats summary_stats(std::span<const double> returns,
                           std::size_t lm_lags, std::size_t adf_lags) {
    if (returns.size() < 20) {
        throw StatsError("summary_stats: need at least 20 observations");
    }
    SummaryStats s;
    s.n = returns.size();
    s.mean = sample_mean(returns);
    s.min = *std::min_element(returns.begin(), returns.end());
    s.max = *std::max_element(returns.begin(), returns.end());
    s.std_dev = std::sqrt(sample_variance(returns));

    if (s.std_dev <= 0.0) {
        s.shape_defined = false;
        s.skewness = std::numeric_limits<double>::quiet_NaN();
        s.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
        return s;
    }

    s.skewness = sample_skewness(returns);
    s.excess_kurtosis = sample_excess_kurtosis(returns);

    const double n = static_cast<double>(s.n);
    s.bera_jarque.statistic =
        n * (s.skewness * s.skewness / 6.0 +
             s.excess_kurtosis * s.excess_kurtosis / 24.0);
    s.bera_jarque.reject_1pct = s.bera_jarque.statistic > chi2_critical(2.0, 0.01);
    s.bera_jarque.reject_5pct = s.bera_jarque.statistic > chi2_critical(2.0, 0.05);

    s.lm_arch = lm_arch(returns, lm_lags);
    s.adf = adf_test(returns, adf_lags);
    return s;
}

}  // namespace hedgekit
