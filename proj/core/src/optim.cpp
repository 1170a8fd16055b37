#include "yardcast/optim.hpp"

#include <cmath>

#include "yardcast/error.hpp"

namespace yardcast {

Eigen::VectorXd numeric_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x, double rel_step) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(std::abs(x(i)), 1.0);
        const double xi = x(i);
        xp(i) = xi + h;
        const double fp = f(xp);
        xp(i) = xi - h;
        const double fm = f(xp);
        xp(i) = xi;
        g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
}

OptimResult bfgs_minimize(const ObjectiveFn& f, const Eigen::VectorXd& x0, const BfgsOptions& opts) {
    const Eigen::Index n = x0.size();
    Eigen::VectorXd x = x0;
    double fx = f(x);
    if (!std::isfinite(fx)) throw FitError("objective is non-finite at the starting point");
    Eigen::VectorXd g = numeric_gradient(f, x, opts.grad_step);
    Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);

    OptimResult res;
    res.x = x;
    res.value = fx;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        res.iterations = iter + 1;
        Eigen::VectorXd dir = -(h_inv * g);
        double slope = g.dot(dir);
        if (!(slope < 0.0)) {  // not a descent direction, restart from steepest descent
            h_inv.setIdentity();
            dir = -g;
            slope = g.dot(dir);
            if (!(slope < 0.0)) break;  // gradient numerically zero
        }

        // Armijo backtracking
        double step = 1.0;
        double f_new = fx;
        Eigen::VectorXd x_new = x;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            x_new = x + step * dir;
            f_new = f(x_new);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no further progress along any tried step

        const double rel_change = std::abs(fx - f_new) / std::max(std::abs(fx), 1e-300);
        Eigen::VectorXd g_new = numeric_gradient(f, x_new, opts.grad_step);
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            h_inv = (eye - rho * s * y.transpose()) * h_inv * (eye - rho * y * s.transpose()) +
                    rho * s * s.transpose();
        }
        x = std::move(x_new);
        fx = f_new;
        g = std::move(g_new);
        res.x = x;
        res.value = fx;
        if (rel_change < opts.rel_tol) {
            res.converged = true;
            break;
        }
    }
    if (!std::isfinite(res.value)) throw FitError("optimizer ended at a non-finite objective");
    return res;
}

OptimResult proximal_gradient_minimize(const SmoothFn& smooth, const PenaltyFn& penalty,
                                       const ProxFn& prox, const Eigen::VectorXd& x0,
                                       const ProximalOptions& opts) {
    Eigen::VectorXd x = x0;
    Eigen::VectorXd z = x0;
    Eigen::VectorXd grad(x0.size());
    double lipschitz = opts.lipschitz_init;
    double momentum = 1.0;

    double fx = smooth(x, nullptr) + penalty(x);
    if (!std::isfinite(fx)) throw FitError("objective is non-finite at the starting point");

    OptimResult res;
    res.x = x;
    res.value = fx;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        res.iterations = iter + 1;
        const double fz = smooth(z, &grad);
        if (!std::isfinite(fz)) throw FitError("objective turned non-finite during descent");

        // backtracking on the local Lipschitz estimate
        Eigen::VectorXd x_new;
        for (int bt = 0;; ++bt) {
            x_new = z - grad / lipschitz;
            prox(x_new, 1.0 / lipschitz);
            const Eigen::VectorXd diff = x_new - z;
            const double quad = fz + grad.dot(diff) + 0.5 * lipschitz * diff.squaredNorm();
            const double fs = smooth(x_new, nullptr);
            if (fs <= quad + 1e-12 * std::max(1.0, std::abs(quad))) break;
            lipschitz *= 2.0;
            if (bt > 60) throw FitError("proximal step search failed to find a usable step");
        }

        const double f_new = smooth(x_new, nullptr) + penalty(x_new);
        if (f_new > fx) {
            // adaptive restart: drop momentum, retry from the best point
            z = x;
            momentum = 1.0;
            lipschitz *= 2.0;
            continue;
        }

        const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        z = x_new + ((momentum - 1.0) / next_momentum) * (x_new - x);
        momentum = next_momentum;

        const double rel_change = std::abs(fx - f_new) / std::max(std::abs(fx), 1e-300);
        x = std::move(x_new);
        fx = f_new;
        res.x = x;
        res.value = fx;
        if (rel_change < opts.rel_tol) {
            res.converged = true;
            break;
        }
        lipschitz = std::max(lipschitz * 0.9, 1e-12);  // allow the estimate to relax
    }
    return res;
}

}  // namespace yardcast
