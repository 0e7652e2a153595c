#include "stopgrid/model.hpp"

#include <cmath>

namespace stopgrid {

ModelParams ModelParams::with_total_learning(double mu0, double mu1, double sigma,
                                             double r, int n_rights, double total) {
    ModelParams p;
    p.mu0 = mu0;
    p.mu1 = mu1;
    p.sigma = sigma;
    p.r = r;
    p.n_rights = n_rights;
    if (n_rights < 1) {
        throw InvalidParameter("ModelParams: n_rights must be >= 1");
    }
    p.eps = total / n_rights;
    return p;
}

void ModelParams::validate() const {
    if (!(mu0 < 0.0)) throw InvalidParameter("ModelParams: mu0 must be < 0");
    if (!(mu1 > 0.0)) throw InvalidParameter("ModelParams: mu1 must be > 0");
    if (!(sigma > 0.0)) throw InvalidParameter("ModelParams: sigma must be > 0");
    if (!(r > 0.0)) throw InvalidParameter("ModelParams: r must be > 0");
    if (n_rights < 1) throw InvalidParameter("ModelParams: n_rights must be >= 1");
    if (!(eps >= 0.0)) throw InvalidParameter("ModelParams: eps must be >= 0");
}

DerivedParams derive_params(const ModelParams& p) {
    p.validate();
    DerivedParams d;
    d.k = -p.mu0 / (p.mu1 - p.mu0);
    d.rho = (p.mu1 - p.mu0) / p.sigma;
    // Positive root of gamma^2 - gamma - 2r/rho^2 = 0; the discriminant
    // 1 + 8r/rho^2 exceeds 1, so the formula is stable and gamma > 1.
    d.gamma = 0.5 * (1.0 + std::sqrt(1.0 + 8.0 * p.r / (d.rho * d.rho)));
    d.r = p.r;
    return d;
}

double G(double pi, double gamma) {
    if (!(pi >= 0.0) || !(pi < 1.0)) {
        throw InvalidParameter("G: belief must lie in [0,1)");
    }
    if (pi == 0.0) return 0.0;
    // (1-pi)(pi/(1-pi))^gamma evaluated in log space; for gamma > 1 the
    // (1-pi) exponent is negative, so evaluation is restricted to pi < 1.
    return std::exp(gamma * std::log(pi) + (1.0 - gamma) * std::log1p(-pi));
}

double G_prime(double pi, double gamma) {
    if (!(pi > 0.0) || !(pi < 1.0)) {
        throw InvalidParameter("G_prime: belief must lie in (0,1)");
    }
    return (gamma - pi) / (pi * (1.0 - pi)) * G(pi, gamma);
}

double b1_closed_form(const DerivedParams& d) {
    if (!(d.gamma > 1.0)) throw InvalidParameter("b1_closed_form: gamma must be > 1");
    if (!(d.k > 0.0) || !(d.k < 1.0)) {
        throw InvalidParameter("b1_closed_form: k must lie in (0,1)");
    }
    return d.gamma * d.k / (d.gamma + d.k - 1.0);
}

double v1_eval(double pi, const DerivedParams& d) {
    if (!(pi >= 0.0) || !(pi <= 1.0)) {
        throw InvalidParameter("v1_eval: belief must lie in [0,1]");
    }
    const double b1 = b1_closed_form(d);
    if (pi >= b1) return pi - d.k;
    if (pi == 0.0) return 0.0;
    const double a1 = (b1 - d.k) / G(b1, d.gamma);
    return a1 * G(pi, d.gamma);
}

} // namespace stopgrid
