#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hedgekit/hedge_models.hpp"
#include "hedgekit/market_data.hpp"

namespace hedgekit {

struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bivariate diagonal-VECH parameter set. The asymmetry terms d_s/d_f add
// d * eps^2 * I(eps < 0) to the own-variance recursions; they are zero for
// the symmetric model.
struct VechParams {
    double mu_s = 0.0, mu_f = 0.0;
    double c_s = 0.0, c_f = 0.0, c_sf = 0.0;
    double a_s = 0.0, a_f = 0.0, a_sf = 0.0;
    double b_s = 0.0, b_f = 0.0, b_sf = 0.0;
    double d_s = 0.0, d_f = 0.0;
};

// Throws EstimationError when positivity, non-negativity or the
// covariance-stationarity bounds a + b + d/2 < 1 are violated.
void validate_params(const VechParams& params);

struct Cov2 {
    double h_s = 0.0;
    double h_f = 0.0;
    double h_sf = 0.0;
};

// Which residuals gate the asymmetry term. Own: I_s for H_s and I_f for H_f.
// Joint: both residuals must be negative (the stricter reading).
enum class IndicatorScope { Own, Joint };

struct FilterOptions {
    bool asymmetric = false;
    IndicatorScope indicator = IndicatorScope::Own;
    // Initial covariance; defaults to the sample covariance of the residuals
    // over the filtered span.
    std::optional<Cov2> init;
    double corr_cap = 0.9999;
};

// Conditional moment path produced by the filter. h_sf is clamped so the
// implied correlation stays inside [-corr_cap, corr_cap]; clamp_count records
// how often that fired.
struct MomentPath {
    std::vector<double> h_s, h_f, h_sf;
    std::vector<double> eps_s, eps_f;
    std::size_t clamp_count = 0;

    std::size_t size() const { return h_s.size(); }
};

MomentPath filter_moments(const VechParams& params, std::span<const double> r_s,
                          std::span<const double> r_f, const FilterOptions& opts);

// Gaussian negative log-likelihood over the span, plus a fixed penalty per
// clamped covariance step.
double neg_log_likelihood(const VechParams& params, std::span<const double> r_s,
                          std::span<const double> r_f, const FilterOptions& opts);

// beta_t = h_sf,t / h_f,t.
HedgeRatioSeries garch_hedge_ratios(const MomentPath& path,
                                    const std::vector<std::string>& dates,
                                    ModelId model);

struct FitOptions {
    IndicatorScope indicator = IndicatorScope::Own;
    double tolerance = 1e-8;
    std::size_t max_iterations = 2000;
    std::size_t min_observations = 100;
};

struct FitResult {
    VechParams params;
    bool converged = false;
    std::size_t iterations = 0;
    double nll = 0.0;
    double initial_nll = 0.0;  // best multi-start initialization
    std::size_t clamp_count = 0;
};

// Thrown when the optimizer exhausts its iteration budget; carries the best
// point found so far.
struct FitError : EstimationError {
    FitError(const std::string& msg, FitResult best_so_far)
        : EstimationError(msg), best(std::move(best_so_far)) {}
    FitResult best;
};

// Maximum likelihood over the in-sample window of the pair. Simplex search
// followed by a BFGS polish on an unconstrained reparameterization, from
// three deterministic starting points.
FitResult fit_vech(const ReturnPair& pair, bool asymmetric,
                   const FitOptions& opts = {});

enum class SpotInnovation { Gaussian, NegSkewMixture };

struct SimOptions {
    SpotInnovation spot = SpotInnovation::Gaussian;
    std::size_t burn_in = 250;
    std::string start_date = "2000-01-03";
};

// Test-harness generator: Gaussian (or skew-mixture) innovations scaled by
// the Cholesky factor of the H_t produced by the same recursion.
// Deterministic given the seed.
ReturnPair simulate_vech(const VechParams& params, std::size_t n,
                         std::uint64_t seed, const SimOptions& opts = {});

}  // namespace hedgekit
