#pragma once

// Special functions and model constants: probabilists' Hermite polynomials
// and expansions, Gamma, Bessel J1, the Tauberian constant c1(n, alpha) and
// the covariance families used by the simulator.

#include <hwl/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace hwl {

/// Dimension n, Hermite rank kappa and decay exponent alpha, with
/// alpha in (0, n / kappa).
struct KernelParams {
    int n = 1;
    int kappa = 1;
    double alpha = 0.5;

    /// kappa * alpha, the exponent of the Riesz kernel.
    double exponent() const { return kappa * alpha; }

    void validate() const {
        if (n < 1) throw DomainError("dimension n must be positive");
        if (kappa < 1) throw DomainError("Hermite rank kappa must be at least 1");
        if (!(alpha > 0.0 && kappa * alpha < n)) throw DomainError("alpha must lie in (0, n/kappa)");
    }

    static KernelParams make(int n, int kappa, double alpha) {
        KernelParams p{n, kappa, alpha};
        p.validate();
        return p;
    }
};

// ---------------------------------------------------------------------------
// Hermite polynomials

/// Probabilists' Hermite polynomial by the three-term recurrence
/// H_{m+1}(u) = u H_m(u) - m H_{m-1}(u).
inline double hermite_poly(int m, double u) {
    if (m < 0) throw DomainError("Hermite order must be nonnegative");
    if (m == 0) return 1.0;
    double prev = 1.0, cur = u;
    for (int k = 1; k < m; ++k) {
        double next = u * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline double factorial(int m) {
    double f = 1.0;
    for (int k = 2; k <= m; ++k) f *= k;
    return f;
}

/// Nodes and weights of the N-point Gauss rule for the standard Gaussian
/// density (Golub-Welsch on the Hermite Jacobi matrix). Weights sum to one.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule gauss_hermite(int points) {
    if (points < 1) throw DomainError("Gauss-Hermite rule needs at least one node");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(points);
    Eigen::VectorXd sub(std::max(points - 1, 0));
    for (int k = 1; k < points; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericalError("Gauss-Hermite eigenproblem failed");
    GaussRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (int i = 0; i < points; ++i) {
        rule.nodes[i] = solver.eigenvalues()[i];
        double v = solver.eigenvectors()(0, i);
        rule.weights[i] = v * v;
    }
    return rule;
}

/// Coefficients a_m of G = sum a_m H_m and the Hermite rank.
struct HermiteExpansion {
    std::vector<double> coeffs;
    /// First index with |a_m| sqrt(m!) above tolerance; -1 if G vanishes.
    int rank = -1;
    /// sqrt(E G^2(X)) for standard Gaussian X.
    double norm = 0.0;
    /// sum a_m^2 m! / E G^2, the share of E G^2 captured up to the max order.
    double captured = 0.0;
    std::string warning;
};

/// Projects G onto H_0..H_M with Gauss-Hermite quadrature, doubling the node
/// count once as a convergence check.
inline HermiteExpansion hermite_coeffs(const std::function<double(double)>& g, int max_order,
                                       double rank_tolerance = 1e-8, double convergence_tolerance = 1e-8) {
    if (max_order < 0) throw DomainError("maximum Hermite order must be nonnegative");

    auto project = [&](int points) {
        GaussRule rule = gauss_hermite(points);
        std::vector<double> a(max_order + 1, 0.0);
        double energy = 0.0;
        for (int i = 0; i < points; ++i) {
            double x = rule.nodes[i];
            double gx = g(x);
            double w = rule.weights[i] * gx;
            energy += rule.weights[i] * gx * gx;
            double prev = 1.0, cur = x;
            for (int m = 0; m <= max_order; ++m) {
                double hm = m == 0 ? 1.0 : cur;
                a[m] += w * hm;
                if (m >= 1) {
                    double next = x * cur - m * prev;
                    prev = cur;
                    cur = next;
                }
            }
        }
        for (int m = 0; m <= max_order; ++m) a[m] /= factorial(m);
        return std::pair{a, energy};
    };

    const int base = std::max(2 * (max_order + 1), 48);
    auto [coarse, coarse_energy] = project(base);
    auto [fine, fine_energy] = project(2 * base);

    HermiteExpansion out;
    out.norm = std::sqrt(fine_energy);
    const double scale = std::max(out.norm, 1e-300);
    for (int m = 0; m <= max_order; ++m) {
        double diff = std::abs(fine[m] - coarse[m]) * std::sqrt(factorial(m));
        if (diff > convergence_tolerance * std::max(scale, 1.0)) {
            std::ostringstream msg;
            msg << "Hermite projection did not converge at order " << m << " (change " << diff
                << " when doubling nodes)";
            throw NumericalError(msg.str());
        }
    }
    out.coeffs = fine;
    double captured = 0.0;
    for (int m = 0; m <= max_order; ++m) {
        double c = std::abs(out.coeffs[m]) * std::sqrt(factorial(m));
        captured += c * c;
        if (out.rank < 0 && c >= rank_tolerance * scale) out.rank = m;
    }
    out.captured = fine_energy > 0.0 ? captured / fine_energy : 0.0;
    if (out.rank == 0) out.warning = "Hermite rank 0: the limit theorem requires E G(X) = 0";
    return out;
}

// ---------------------------------------------------------------------------
// Gamma

namespace detail {
// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_series(double x) {
    double a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (x + static_cast<double>(i));
    return a;
}
}  // namespace detail

/// log |Gamma(x)|.
inline double log_gamma(double x) {
    if (x < 0.5) {
        if (x == std::floor(x)) throw DomainError("Gamma has a pole at nonpositive integers");
        double s = std::sin(std::numbers::pi * x);
        return std::log(std::numbers::pi / std::abs(s)) - log_gamma(1.0 - x);
    }
    x -= 1.0;
    double t = x + detail::kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(detail::lanczos_series(x));
}

inline double gamma(double x) {
    if (x < 0.5) {
        if (x == std::floor(x)) throw DomainError("Gamma has a pole at nonpositive integers");
        double s = std::sin(std::numbers::pi * x);
        return std::numbers::pi / (s * gamma(1.0 - x));
    }
    if (x > 140.0) return std::exp(log_gamma(x));
    x -= 1.0;
    double t = x + detail::kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * detail::lanczos_series(x);
}

/// c1(n, alpha) = 2^alpha pi^{n/2} Gamma(alpha/2) / Gamma((n - alpha)/2): the
/// spectral density |lambda|^{alpha-n} is the Fourier pair of c1 |x|^{-alpha}.
inline double c1(int n, double alpha) {
    if (n < 1) throw DomainError("dimension must be positive");
    if (!(alpha > 0.0 && alpha < n)) throw DomainError("c1 requires 0 < alpha < n");
    return std::exp(alpha * std::numbers::ln2 + 0.5 * n * std::log(std::numbers::pi) + log_gamma(alpha / 2.0) -
                    log_gamma((n - alpha) / 2.0));
}

// ---------------------------------------------------------------------------
// Bessel J1

/// J1(x): power series (long double) for |x| <= 20, Hankel asymptotic
/// expansion truncated at its smallest term beyond.
inline double bessel_j1(double x) {
    const double ax = std::abs(x);
    if (ax <= 20.0) {
        long double half = 0.5L * ax;
        long double q = -half * half;
        long double term = half, sum = half;
        for (int k = 1; k < 80; ++k) {
            term *= q / (static_cast<long double>(k) * (k + 1));
            sum += term;
            if (std::abs(term) < 1e-21L * std::abs(sum) + 1e-300L) break;
        }
        double v = static_cast<double>(sum);
        return x < 0 ? -v : v;
    }
    // a_k = prod_{j<=k} (mu - (2j-1)^2) / (k! (8x)^k), mu = 4;
    // P = sum_{k even} (-1)^{k/2} a_k, Q = sum_{k odd} (-1)^{(k-1)/2} a_k
    const double mu = 4.0;
    const double z8 = 8.0 * ax;
    double p = 1.0, q = 0.0, term = 1.0, last = 1.0;
    for (int k = 1; k < 60; ++k) {
        double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * z8);
        double mag = std::abs(term);
        if (mag > last) break;
        last = mag;
        if (k % 2 == 1)
            q += ((k - 1) / 2 % 2 == 0 ? 1.0 : -1.0) * term;
        else
            p += (k / 2 % 2 == 0 ? 1.0 : -1.0) * term;
        if (mag < 1e-17) break;
    }
    const double chi = ax - 0.75 * std::numbers::pi;
    double v = std::sqrt(2.0 / (std::numbers::pi * ax)) * (p * std::cos(chi) - q * std::sin(chi));
    return x < 0 ? -v : v;
}

/// 2 J1(x) / x, continuous at 0 with value 1.
inline double jinc(double x) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 8.0 + x2 * x2 / 192.0;
    }
    return 2.0 * bessel_j1(x) / x;
}

// ---------------------------------------------------------------------------
// Covariance models

enum class CovarianceFamily { pure_power, cauchy };

/// Isotropic covariance B(r). The pure-power family carries the asymptote
/// h0 c1(n, alpha) r^{-alpha} of a field with spectral density
/// h0 |lambda|^{alpha - n}; the Cauchy family (1 + r^2)^{-alpha/2} is the
/// unit-variance model used for simulation.
struct CovarianceModel {
    CovarianceFamily family = CovarianceFamily::cauchy;
    double alpha = 1.0;
    double h0 = 1.0;
    int dim = 2;
};

inline double covariance(const CovarianceModel& model, double r) {
    if (!(r >= 0.0)) throw DomainError("distance must be nonnegative");
    switch (model.family) {
        case CovarianceFamily::cauchy: return std::pow(1.0 + r * r, -0.5 * model.alpha);
        case CovarianceFamily::pure_power: return model.h0 * c1(model.dim, model.alpha) * std::pow(r, -model.alpha);
    }
    return 0.0;
}

}  // namespace hwl
