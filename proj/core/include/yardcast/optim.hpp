#pragma once

#include <Eigen/Dense>
#include <functional>

namespace yardcast {

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

/// Central differences with a relative step of 1e-6 per coordinate.
Eigen::VectorXd numeric_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x,
                                 double rel_step = 1e-6);

struct OptimResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct BfgsOptions {
    int max_iter = 500;
    double rel_tol = 1e-10;   // stop when |df| / max(|f|, eps) drops below
    double grad_step = 1e-6;  // relative step for the numeric gradient
};

/// Quasi-Newton (BFGS) descent driven by numerically approximated gradients.
/// Throws FitError when the objective turns non-finite.
OptimResult bfgs_minimize(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                          const BfgsOptions& opts = {});

/// Smooth part of a composite objective: returns the value at x and fills
/// the gradient when `grad` is non-null.
using SmoothFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;
/// Non-smooth penalty value (e.g. a weighted L1 norm).
using PenaltyFn = std::function<double(const Eigen::VectorXd& x)>;
/// In-place proximal operator of the non-smooth part at the given step size.
using ProxFn = std::function<void(Eigen::VectorXd& x, double step)>;

struct ProximalOptions {
    int max_iter = 2000;
    double rel_tol = 1e-8;
    double lipschitz_init = 1.0;
};

/// Accelerated proximal-gradient descent (FISTA with backtracking step
/// search and adaptive restart) for smooth + non-smooth composites.
OptimResult proximal_gradient_minimize(const SmoothFn& smooth, const PenaltyFn& penalty,
                                       const ProxFn& prox, const Eigen::VectorXd& x0,
                                       const ProximalOptions& opts = {});

}  // namespace yardcast
