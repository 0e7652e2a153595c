#include "stopgrid/pde.hpp"

#include <cmath>
#include <vector>

namespace stopgrid {

namespace {

// Thomas algorithm for the constant-in-time tridiagonal system
// (I - theta*dt*A). The matrix is diagonally dominant for theta >= 0,
// so no pivoting is performed; a vanishing pivot signals grid misuse.
struct TridiagFactors {
    std::vector<double> diag;   // modified diagonal after elimination
    std::vector<double> lower;  // subdiagonal (constant)
    std::vector<double> upper;  // superdiagonal (constant)
};

TridiagFactors factor(const std::vector<double>& lam, double theta, double dt) {
    const std::size_t n = lam.size(); // interior node count
    TridiagFactors f;
    f.diag.resize(n);
    f.lower.resize(n);
    f.upper.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.diag[i] = 1.0 + 2.0 * theta * dt * lam[i];
        f.lower[i] = -theta * dt * lam[i];
        f.upper[i] = -theta * dt * lam[i];
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(f.diag[i - 1]) < 1e-300) {
            throw NumericalError("diffuse_expectation: singular tridiagonal system");
        }
        const double w = f.lower[i] / f.diag[i - 1];
        f.diag[i] -= w * f.upper[i - 1];
        f.lower[i] = w; // store the multiplier
    }
    if (!f.diag.empty() && std::abs(f.diag.back()) < 1e-300) {
        throw NumericalError("diffuse_expectation: singular tridiagonal system");
    }
    return f;
}

void solve(const TridiagFactors& f, std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= f.lower[i] * rhs[i - 1];
    rhs[n - 1] /= f.diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - f.upper[i] * rhs[i + 1]) / f.diag[i];
    }
}

} // namespace

GridFunction diffuse_expectation(const GridFunction& v, double eps,
                                 const DerivedParams& d, const PdeConfig& cfg,
                                 double boundary_left, double boundary_right) {
    cfg.validate();
    if (!(eps >= 0.0)) throw InvalidParameter("diffuse_expectation: eps must be >= 0");
    const int m = v.grid.m;
    if (std::abs(v[0] - boundary_left) > 1e-9 ||
        std::abs(v[m - 1] - boundary_right) > 1e-9) {
        throw InvalidParameter(
            "diffuse_expectation: boundary values must match v at the endpoints");
    }
    if (eps == 0.0) return v;

    const double h = v.grid.h();
    const double dt_target = cfg.dt_target > 0.0 ? cfg.dt_target : eps / 64.0;
    const int steps = static_cast<int>(std::ceil(eps / dt_target));
    const double dt = eps / steps;

    // lam_i = c(pi_i)/h^2 with c = rho^2 pi^2 (1-pi)^2 / 2 on interior nodes.
    const int ni = m - 2;
    std::vector<double> lam(static_cast<std::size_t>(ni));
    double coeff_max = 0.0;
    for (int i = 1; i <= ni; ++i) {
        const double pi = v.grid.node(i);
        const double c2 = d.rho * d.rho * pi * pi * (1.0 - pi) * (1.0 - pi);
        lam[i - 1] = 0.5 * c2 / (h * h);
        coeff_max = std::max(coeff_max, c2);
    }
    if (cfg.theta < 0.5 && dt > h * h / coeff_max) {
        throw InvalidParameter(
            "diffuse_expectation: dt violates the explicit-scheme stability bound");
    }

    std::vector<double> u(v.values);
    u[0] = boundary_left;
    u[static_cast<std::size_t>(m - 1)] = boundary_right;

    const int rann = std::min(cfg.rannacher_steps, steps);
    TridiagFactors f_implicit, f_theta;
    bool have_implicit = false, have_theta = false;

    std::vector<double> rhs(static_cast<std::size_t>(ni));
    for (int s = 0; s < steps; ++s) {
        const double theta = (s < rann) ? 1.0 : cfg.theta;
        // rhs = u + (1-theta) dt A u on interior nodes, with Dirichlet data
        // folded in on both sides.
        for (int i = 0; i < ni; ++i) {
            const double um = (i == 0) ? u[0] : u[static_cast<std::size_t>(i)];
            const double uc = u[static_cast<std::size_t>(i + 1)];
            const double up = (i == ni - 1) ? u[static_cast<std::size_t>(m - 1)]
                                            : u[static_cast<std::size_t>(i + 2)];
            rhs[static_cast<std::size_t>(i)] =
                uc + (1.0 - theta) * dt * lam[static_cast<std::size_t>(i)] *
                         (um - 2.0 * uc + up);
        }
        if (theta > 0.0) {
            TridiagFactors* f;
            if (theta == 1.0) {
                if (!have_implicit) { f_implicit = factor(lam, 1.0, dt); have_implicit = true; }
                f = &f_implicit;
            } else {
                if (!have_theta) { f_theta = factor(lam, theta, dt); have_theta = true; }
                f = &f_theta;
            }
            rhs[0] += theta * dt * lam[0] * u[0];
            rhs[static_cast<std::size_t>(ni - 1)] +=
                theta * dt * lam[static_cast<std::size_t>(ni - 1)] *
                u[static_cast<std::size_t>(m - 1)];
            solve(*f, rhs);
        }
        for (int i = 0; i < ni; ++i) u[static_cast<std::size_t>(i + 1)] = rhs[static_cast<std::size_t>(i)];
    }
    return GridFunction(v.grid, std::move(u));
}

double second_moment_check(double pi, double eps, const DerivedParams& d,
                           const PiGrid& grid, const PdeConfig& cfg) {
    if (!(pi >= 0.0) || !(pi <= 1.0)) {
        throw InvalidParameter("second_moment_check: belief must lie in [0,1]");
    }
    GridFunction v = sample(grid, [pi](double x) { return (x - pi) * (x - pi); });
    GridFunction out = diffuse_expectation(v, eps, d, cfg, v[0], v[grid.m - 1]);
    return out.interpolate(pi);
}

} // namespace stopgrid
