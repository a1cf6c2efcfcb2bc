#include "hedgekit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hedgekit::optimize {

Result nelder_mead(const Objective& f, const std::vector<double>& start,
                   double initial_step, const Options& opts) {
    const std::size_t n = start.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += start[i] != 0.0 ? initial_step * std::fabs(start[i])
                                             : initial_step;
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    Result res;
    std::vector<std::size_t> order(n + 1);
    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });

        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::fabs(fv[worst] - fv[best]) <=
            opts.tolerance * (1.0 + std::fabs(fv[best]))) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[k][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) {
                p[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
            }
            return p;
        };

        const auto reflected = blend(-alpha);
        const double fr = f(reflected);
        if (fr < fv[best]) {
            const auto expanded = blend(-gamma);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                fv[worst] = fe;
            } else {
                simplex[worst] = reflected;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = reflected;
            fv[worst] = fr;
            continue;
        }
        const auto contracted = blend(rho);
        const double fc = f(contracted);
        if (fc < fv[worst]) {
            simplex[worst] = contracted;
            fv[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == best) continue;
            for (std::size_t j = 0; j < n; ++j) {
                simplex[k][j] = simplex[best][j] + sigma * (simplex[k][j] - simplex[best][j]);
            }
            fv[k] = f(simplex[k]);
        }
    }

    const std::size_t best =
        std::min_element(fv.begin(), fv.end()) - fv.begin();
    res.x = simplex[best];
    res.value = fv[best];
    return res;
}

namespace {

std::vector<double> fd_gradient(const Objective& f, const std::vector<double>& x,
                                double fx) {
    std::vector<double> g(x.size());
    std::vector<double> p = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::fabs(x[i]));
        p[i] = x[i] + h;
        const double fp = f(p);
        p[i] = x[i] - h;
        const double fm = f(p);
        p[i] = x[i];
        if (std::isfinite(fp) && std::isfinite(fm)) {
            g[i] = (fp - fm) / (2.0 * h);
        } else {
            g[i] = std::isfinite(fp) ? (fp - fx) / h : (fx - fm) / h;
        }
    }
    return g;
}

}  // namespace

Result bfgs(const Objective& f, const std::vector<double>& start, const Options& opts) {
    const std::size_t n = start.size();
    Result res;
    res.x = start;
    res.value = f(start);
    if (!std::isfinite(res.value)) return res;

    // inverse Hessian approximation, starts at identity
    std::vector<std::vector<double>> hinv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) hinv[i][i] = 1.0;

    std::vector<double> g = fd_gradient(f, res.x, res.value);

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        std::vector<double> dir(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) dir[i] -= hinv[i][j] * g[j];
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) slope += dir[i] * g[i];
        if (slope >= 0.0) {
            // not a descent direction; reset
            for (auto& row : hinv) std::fill(row.begin(), row.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) hinv[i][i] = 1.0;
            for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
            slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
            if (slope >= 0.0) {
                res.converged = true;
                break;
            }
        }

        // backtracking Armijo line search
        double step = 1.0;
        double fnew = std::numeric_limits<double>::infinity();
        std::vector<double> xnew(n);
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xnew[i] = res.x[i] + step * dir[i];
            fnew = f(xnew);
            if (std::isfinite(fnew) && fnew <= res.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.converged = true;  // no further descent found at machine scale
            break;
        }

        const std::vector<double> gnew = fd_gradient(f, xnew, fnew);
        std::vector<double> s(n), ydiff(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xnew[i] - res.x[i];
            ydiff[i] = gnew[i] - g[i];
        }
        const double improvement = res.value - fnew;
        res.x = xnew;
        res.value = fnew;
        g = gnew;

        if (improvement <= opts.tolerance * (1.0 + std::fabs(res.value))) {
            res.converged = true;
            break;
        }

        const double sy = std::inner_product(s.begin(), s.end(), ydiff.begin(), 0.0);
        if (sy > 1e-12) {
            // BFGS inverse update
            std::vector<double> hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) hy[i] += hinv[i][j] * ydiff[j];
            }
            const double yhy = std::inner_product(ydiff.begin(), ydiff.end(), hy.begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    hinv[i][j] += ((sy + yhy) * s[i] * s[j]) / (sy * sy) -
                                  (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }
    }
    return res;
}

}  // namespace hedgekit::optimize
