#pragma once

#include <Eigen/Dense>
#include <functional>

namespace chiral {

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;
  double min_step = 1e-6;  // a step below this raises the stiffness warning
  long max_steps = 10'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  bool stiffness_warning = false;
};

/// Dormand-Prince 5(4) integrator. Advances y from t0 towards t1 and calls
/// observer(t, y, dydt) after every accepted step; integration stops early
/// when the observer returns true. Returns the time reached.
double integrate_dopri5(const OdeRhs& rhs, Eigen::VectorXd& y, double t0, double t1, const OdeOptions& options,
                        const std::function<bool(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>& observer,
                        OdeStats* stats = nullptr);

}  // namespace chiral
