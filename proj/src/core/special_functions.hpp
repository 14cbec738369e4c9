#pragma once

#include <functional>
#include <utility>

namespace circlekit {

struct RootConfig {
  double abs_tol = 1e-12;
  int max_iter = 200;
  double lo = 0.0;
  double hi = 1.0;
};

// Eta(t) is the unique u in (0,1) with u + ln u = 1 - t.
struct EtaPoint {
  double t;
  double eta;
  double eta_prime;
};

// Only 4 (conditional envelope for the prime sum) or 5 (unconditional).
class ThetaMode {
 public:
  explicit ThetaMode(int theta);
  int value() const noexcept { return theta_; }
  friend bool operator==(ThetaMode, ThetaMode) = default;

 private:
  int theta_;
};

struct SigmaPlan {
  ThetaMode theta{5};
  int k = 0;
  double sigma = 0.0;
  double tau = 0.0;
  long even_target = 0;
  // image of (c, c + 4/k) under sigma -> k(sigma + tau(sigma))
  double image_lo = 0.0;
  double image_hi = 0.0;
  // k(tau(c) - tau(c + 4/k)); must be below 2
  double tau_drop = 0.0;
};

// Safeguarded root finder: bisection until the bracket is narrower than
// `newton_width`, then Newton steps that fall back to bisection whenever they
// leave the bracket. f must change sign on [cfg.lo, cfg.hi].
double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, const RootConfig& cfg,
                       double newton_width = 1e-3);

RootConfig default_eta_config();

// Accuracy is absolute in eta; once t > ~690 the root drops under the
// bracket floor 1e-300 and a domain error is raised.
EtaPoint eta(double t, const RootConfig& cfg = default_eta_config());

// Root in [1, inf) of 2c = 2 + ln(theta*c - 1).
double solve_transcendental_constant(ThetaMode theta, const RootConfig& cfg = {});

// c1 = 4/5 + ln 5 (Eta(c1) = 1/5) and c1' = 3/4 + ln 4 (Eta(c1') = 1/4).
double eta_level_constant(ThetaMode theta);

// Stationary point of tau -> tau/sigma + theta*Eta(sigma + tau). sigma in [5/4, 3].
double tau_of_sigma(double sigma, ThetaMode theta);
double tau_prime(double sigma, ThetaMode theta);

// h(tau) = tau/sigma + theta*Eta(sigma + tau)
double h_objective(double tau, double sigma, ThetaMode theta);

// Minimum of h over [0, sigma] by a grid scan followed by golden-section
// refinement. Independent of the closed form.
std::pair<double, double> minimize_h(double sigma, ThetaMode theta, int grid_points = 400);

// E(sigma) = tau(sigma)/sigma + theta/(theta*sigma - 1), sigma in [3/2, 3].
// With cross_check set, the value is compared against minimize_h and a
// ConsistencyError is thrown when they differ by more than 1e-6.
double big_e(double sigma, ThetaMode theta, bool cross_check = false);

// Unique c in [3/2, 3] with E(c) = 1.
double find_c_theta(ThetaMode theta, const RootConfig& cfg = {});

// Picks sigma in (c, c + 4/k) such that k(sigma + tau(sigma)) is the smallest
// even integer available. k >= 17.
SigmaPlan sigma_even_plan(int k, ThetaMode theta);

}  // namespace circlekit
