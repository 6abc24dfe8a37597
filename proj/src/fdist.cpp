#include "rmfm/fdist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmfm {

namespace {

constexpr double kBetaEps = 1e-14;
constexpr double kTailMass = 1e-13;
constexpr double kTiny = 1e-300;

void check_params(const FParams& p) {
    if (!(p.nu1 > 0) || !(p.nu2 > 0) || !std::isfinite(p.nu1) || !std::isfinite(p.nu2))
        throw std::invalid_argument("F distribution degrees of freedom must be positive");
    if (!(p.ncp >= 0) || !std::isfinite(p.ncp))
        throw std::invalid_argument("F distribution noncentrality must be nonnegative");
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kBetaEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

double log_beta_prefactor(double x, double a, double b) {
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
}

double poisson_log_weight(double mean, long k) {
    return -mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
}

// Sum of w_k * term(k) over Poisson(mean) weights, outward from the mode.
template <class Term>
double poisson_mixture(double mean, Term term) {
    if (mean == 0.0) return term(0);
    const long mode = static_cast<long>(std::floor(mean));
    const double w_mode = std::exp(poisson_log_weight(mean, mode));

    double total = w_mode * term(mode);
    double mass = w_mode;

    double w = w_mode;
    for (long k = mode; k > 0 && 1.0 - mass >= kTailMass; --k) {
        w *= static_cast<double>(k) / mean;
        if (w == 0.0) break;
        total += w * term(k - 1);
        mass += w;
    }
    w = w_mode;
    for (long k = mode + 1; 1.0 - mass >= kTailMass; ++k) {
        w *= mean / static_cast<double>(k);
        if (w == 0.0 && static_cast<double>(k) > mean) break;
        total += w * term(k);
        mass += w;
    }
    return total;
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("incomplete beta needs positive shape parameters");
    if (!(x >= 0 && x <= 1)) throw std::invalid_argument("incomplete beta argument outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(log_beta_prefactor(x, a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(x, a, b) / a;
    return 1.0 - front * beta_fraction(1.0 - x, b, a) / b;
}

double f_cdf(double x, const FParams& p) {
    check_params(p);
    if (std::isnan(x)) throw std::invalid_argument("f_cdf of NaN");
    if (x <= 0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double z = p.nu1 * x / (p.nu1 * x + p.nu2);
    const double a = p.nu1 / 2.0;
    const double b = p.nu2 / 2.0;
    double cdf = poisson_mixture(p.ncp / 2.0, [&](long k) { return incomplete_beta(z, a + static_cast<double>(k), b); });
    return std::fmin(1.0, std::fmax(0.0, cdf));
}

double f_sf(double x, const FParams& p) {
    check_params(p);
    if (std::isnan(x)) throw std::invalid_argument("f_sf of NaN");
    if (x <= 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    // 1 - I_z(a, b) = I_{1-z}(b, a); 1 - z computed without cancellation.
    const double one_minus_z = p.nu2 / (p.nu1 * x + p.nu2);
    const double a = p.nu1 / 2.0;
    const double b = p.nu2 / 2.0;
    double sf = poisson_mixture(p.ncp / 2.0,
                                [&](long k) { return incomplete_beta(one_minus_z, b, a + static_cast<double>(k)); });
    return std::fmin(1.0, std::fmax(0.0, sf));
}

double f_quantile(double alpha, double nu1, double nu2) {
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("f_quantile: alpha must lie in (0, 1)");
    const FParams p{nu1, nu2, 0.0};
    check_params(p);
    const double target = 1.0 - alpha;

    double lo = 0.0;
    double hi = 1.0;
    while (f_cdf(hi, p) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("f_quantile: could not bracket the quantile");
    }
    // Bisection to the resolution of doubles.
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f_cdf(mid, p) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double power(double alpha, double nu1, double nu2, double ncp) {
    if (!(ncp >= 0)) throw std::invalid_argument("power: ncp must be nonnegative");
    const double critical = f_quantile(alpha, nu1, nu2);
    return f_sf(critical, FParams{nu1, nu2, ncp});
}

double p_value(double f, double nu1, double nu2) {
    if (!std::isfinite(f)) throw std::invalid_argument("p_value: F statistic is undefined");
    return f_sf(f, FParams{nu1, nu2, 0.0});
}

}  // namespace rmfm
