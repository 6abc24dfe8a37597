#pragma once

// Central and noncentral F distribution functions in double precision.
//
// The noncentral CDF is the Poisson(ncp/2) mixture of central beta CDFs,
// summed outward from the Poisson mode until the unvisited Poisson mass
// falls below 1e-13.

namespace rmfm {

struct FParams {
    double nu1;
    double nu2;
    double ncp = 0.0;
};

/// Regularized incomplete beta I_x(a, b), continued fraction to 1e-14.
double incomplete_beta(double x, double a, double b);

double f_cdf(double x, const FParams& p);
/// Upper tail 1 - f_cdf, summed directly so small tails keep precision.
double f_sf(double x, const FParams& p);

/// Upper-alpha quantile of the central F: f_cdf(q; nu1, nu2) = 1 - alpha.
double f_quantile(double alpha, double nu1, double nu2);

/// Probability that the size-alpha F test rejects when the ncp is `ncp`.
double power(double alpha, double nu1, double nu2, double ncp);

/// Central upper-tail probability of an observed F value.
double p_value(double f, double nu1, double nu2);

}  // namespace rmfm
