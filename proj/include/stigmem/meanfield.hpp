#pragma once
// Mean-field model of coupled memory density and trace intensity:
//
//   dM/dt = alpha * <k> * chi * T - beta * M
//   dT/dt = rho * kappa * M - mu * T
//
// The linear system's leading eigenvalue crosses zero at the critical density
// rho_c = beta*mu / (alpha*<k>*chi*kappa); below it both fields relax to
// zero, above it they grow. Trajectories come from a fixed-step RK4
// integrator, and the theoretical order-parameter curve is the clamped,
// normalized leading eigenvalue across a density grid.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "stigmem/errors.hpp"

namespace stigmem {

struct MeanFieldParams {
    double alpha = 0.25;       // memory acquisition rate per contact
    double beta = 1.0;         // memory decay rate (timescale normalization)
    double mu = 0.20;          // effective trace decay rate
    double mean_degree = 3.5;  // mean interaction degree <k>
    double chi = 1.0;          // trace-to-memory conversion
    double kappa = 1.0;        // memory-to-trace deposition

    void validate() const {
        if (alpha <= 0 || beta <= 0 || mu <= 0 || mean_degree <= 0 || chi <= 0 || kappa <= 0)
            throw argument_error("meanfield: all parameters must be strictly positive");
    }
};

inline double critical_density(const MeanFieldParams& p) {
    p.validate();
    return (p.beta * p.mu) / (p.alpha * p.mean_degree * p.chi * p.kappa);
}

struct EigenPair {
    double plus = 0.0;   // leading eigenvalue
    double minus = 0.0;
};

// Real eigenvalues of the coupling matrix [[-beta, alpha*k*chi], [rho*kappa, -mu]].
// The discriminant equals (beta - mu)^2 + 4*alpha*k*chi*kappa*rho, which is
// non-negative for all rho >= 0, so both roots are always real.
inline EigenPair jacobian_eigenvalues(const MeanFieldParams& p, double rho) {
    p.validate();
    if (rho < 0) throw argument_error("meanfield: density must be >= 0");
    const double trace = -(p.beta + p.mu);
    const double det = p.beta * p.mu - p.alpha * p.mean_degree * p.chi * p.kappa * rho;
    const double disc = trace * trace - 4.0 * det;
    const double root = std::sqrt(disc);
    return {(trace + root) / 2.0, (trace - root) / 2.0};
}

struct MeanFieldPoint {
    double t = 0.0;
    double memory_density = 0.0;
    double trace_intensity = 0.0;
};

// Classic RK4 with a fixed step. The trajectory includes the initial state and
// one point per step; t_end is rounded to a whole number of steps.
inline std::vector<MeanFieldPoint> integrate_meanfield(const MeanFieldParams& p, double rho,
                                                       double m0, double t0, double t_end,
                                                       double dt) {
    p.validate();
    if (rho < 0) throw argument_error("meanfield: density must be >= 0");
    if (dt <= 0) throw argument_error("meanfield: step size must be positive");
    if (m0 < 0 || t0 < 0) throw argument_error("meanfield: initial state must be non-negative");

    const double a = p.alpha * p.mean_degree * p.chi;
    const double c = rho * p.kappa;
    auto deriv = [&](double m, double t) {
        return std::pair<double, double>{a * t - p.beta * m, c * m - p.mu * t};
    };

    const long steps = std::lround(t_end / dt);
    std::vector<MeanFieldPoint> out;
    out.reserve(std::size_t(steps) + 1);
    double m = m0, tr = t0;
    out.push_back({0.0, m, tr});
    for (long i = 0; i < steps; ++i) {
        const auto k1 = deriv(m, tr);
        const auto k2 = deriv(m + 0.5 * dt * k1.first, tr + 0.5 * dt * k1.second);
        const auto k3 = deriv(m + 0.5 * dt * k2.first, tr + 0.5 * dt * k2.second);
        const auto k4 = deriv(m + dt * k3.first, tr + dt * k3.second);
        m += dt / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
        tr += dt / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
        if (!std::isfinite(m) || !std::isfinite(tr))
            throw integration_error("meanfield: non-finite state at step " + std::to_string(i + 1));
        out.push_back({double(i + 1) * dt, m, tr});
    }
    return out;
}

// (rho, order parameter) across the grid: max(0, lambda_plus) normalized by
// its value at the largest grid density. Zero at and below the critical
// density, monotone increasing above it.
inline std::vector<std::pair<double, double>> order_parameter_curve(
    const MeanFieldParams& p, const std::vector<double>& rho_grid) {
    if (rho_grid.empty()) throw argument_error("meanfield: density grid must be nonempty");
    const double rho_max = *std::max_element(rho_grid.begin(), rho_grid.end());
    const double norm = std::max(0.0, jacobian_eigenvalues(p, rho_max).plus);
    std::vector<std::pair<double, double>> out;
    out.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        const double raw = std::max(0.0, jacobian_eigenvalues(p, rho).plus);
        out.emplace_back(rho, norm > 0.0 ? raw / norm : 0.0);
    }
    return out;
}

// Bisection for the density where the leading eigenvalue crosses zero;
// cross-check for the closed-form critical density.
inline double critical_density_bisection(const MeanFieldParams& p, double lo = 0.0,
                                         double hi = 10.0, double tol = 1e-12) {
    p.validate();
    auto f = [&](double rho) { return jacobian_eigenvalues(p, rho).plus; };
    if (f(lo) > 0 || f(hi) < 0) throw argument_error("meanfield: bisection bracket invalid");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace stigmem
