#include "special_functions.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace circlekit {

ThetaMode::ThetaMode(int theta) : theta_(theta) {
  if (theta != 4 && theta != 5) throw DomainError("theta must be 4 or 5, got " + std::to_string(theta));
}

double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, const RootConfig& cfg,
                       double newton_width) {
  if (!(cfg.abs_tol > 0)) throw DomainError("root finder tolerance must be positive");
  if (!(cfg.lo < cfg.hi)) throw DomainError("root finder bracket must satisfy lo < hi");
  double lo = cfg.lo, hi = cfg.hi;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream os;
    os << "no sign change on bracket [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
  const bool rising = flo < 0;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < cfg.max_iter; ++it) {
    double fx = f(x);
    if (fx == 0) return x;
    if ((fx < 0) == rising) lo = x; else hi = x;
    if (hi - lo <= cfg.abs_tol) return 0.5 * (lo + hi);
    double next;
    if (hi - lo > newton_width) {
      next = 0.5 * (lo + hi);
    } else {
      double d = df(x);
      next = (d != 0 && std::isfinite(d)) ? x - fx / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= cfg.abs_tol) return next;
    }
    x = next;
  }
  throw ConvergenceError("root finder did not converge within " + std::to_string(cfg.max_iter) +
                         " iterations");
}

RootConfig default_eta_config() {
  RootConfig cfg;
  cfg.lo = 1e-300;
  cfg.hi = 1.0 - 1e-12;
  return cfg;
}

EtaPoint eta(double t, const RootConfig& cfg) {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("eta requires t > 0");
  const double rhs = 1.0 - t;
  // Solve in y = ln u, where y + e^y = 1 - t has derivative >= 1 and the
  // residual stays absolute even when eta is tiny.
  auto f = [rhs](double y) { return std::exp(y) + y - rhs; };
  auto df = [](double y) { return std::exp(y) + 1.0; };
  RootConfig c = cfg;
  c.lo = std::log(cfg.lo);
  c.hi = std::log(cfg.hi);
  if (f(c.lo) > 0 || f(c.hi) < 0) {
    throw DomainError("eta(" + std::to_string(t) + ") root lies outside the bracket [" +
                      std::to_string(cfg.lo) + ", " + std::to_string(cfg.hi) + "]");
  }
  double u = std::exp(solve_bracketed(f, df, c));
  return EtaPoint{t, u, -u / (1.0 + u)};
}

double solve_transcendental_constant(ThetaMode theta, const RootConfig& cfg) {
  const double th = theta.value();
  auto f = [th](double c) { return 2.0 * c - 2.0 - std::log(th * c - 1.0); };
  auto df = [th](double c) { return 2.0 - th / (th * c - 1.0); };
  RootConfig c = cfg;
  c.lo = 1.0;
  c.hi = 3.0;
  return solve_bracketed(f, df, c);
}

double eta_level_constant(ThetaMode theta) {
  const double th = theta.value();
  return (th - 1.0) / th + std::log(th);
}

namespace {
void require_sigma(double sigma, double lo, double hi, const char* what) {
  if (!(sigma >= lo && sigma <= hi)) {
    std::ostringstream os;
    os << what << " requires sigma in [" << lo << ", " << hi << "], got " << sigma;
    throw DomainError(os.str());
  }
}
}  // namespace

double tau_of_sigma(double sigma, ThetaMode theta) {
  require_sigma(sigma, 1.25, 3.0, "tau_of_sigma");
  const double w = theta.value() * sigma - 1.0;
  return 1.0 - sigma - 1.0 / w + std::log(w);
}

double tau_prime(double sigma, ThetaMode theta) {
  require_sigma(sigma, 1.25, 3.0, "tau_prime");
  const double th = theta.value();
  const double w = th * sigma - 1.0;
  return -1.0 + th / w + th / (w * w);
}

double h_objective(double tau, double sigma, ThetaMode theta) {
  return tau / sigma + theta.value() * eta(sigma + tau).eta;
}

std::pair<double, double> minimize_h(double sigma, ThetaMode theta, int grid_points) {
  auto h = [&](double tau) { return h_objective(tau, sigma, theta); };
  const double step = sigma / grid_points;
  int best = 0;
  double best_val = h(0.0);
  for (int i = 1; i <= grid_points; ++i) {
    double v = h(i * step);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = std::max(0.0, (best - 1) * step);
  double b = std::min(sigma, (best + 1) * step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = h(x1), f2 = h(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = h(x2);
    }
  }
  double tau = 0.5 * (a + b);
  return {tau, h(tau)};
}

double big_e(double sigma, ThetaMode theta, bool cross_check) {
  require_sigma(sigma, 1.5, 3.0, "big_e");
  const double th = theta.value();
  const double value = tau_of_sigma(sigma, theta) / sigma + th / (th * sigma - 1.0);
  if (cross_check) {
    const double direct = minimize_h(sigma, theta).second;
    if (std::abs(direct - value) > 1e-6) {
      std::ostringstream os;
      os.precision(12);
      os << "E(" << sigma << "): closed form " << value << " vs direct minimum " << direct;
      throw ConsistencyError(os.str());
    }
  }
  return value;
}

double find_c_theta(ThetaMode theta, const RootConfig& cfg) {
  const double th = theta.value();
  auto f = [&](double s) { return big_e(s, theta) - 1.0; };
  auto df = [&](double s) {
    const double w = th * s - 1.0;
    return tau_prime(s, theta) / s - tau_of_sigma(s, theta) / (s * s) - th * th / (w * w);
  };
  RootConfig c = cfg;
  c.lo = 1.5;
  c.hi = 3.0;
  return solve_bracketed(f, df, c);
}

SigmaPlan sigma_even_plan(int k, ThetaMode theta) {
  if (k < 17) throw DomainError("sigma_even_plan requires k >= 17, got " + std::to_string(k));
  const double c = find_c_theta(theta);
  const double top = c + 4.0 / k;
  SigmaPlan plan;
  plan.theta = theta;
  plan.k = k;
  plan.image_lo = k * (c + tau_of_sigma(c, theta));
  plan.image_hi = k * top + k * tau_of_sigma(top, theta);
  plan.tau_drop = k * (tau_of_sigma(c, theta) - tau_of_sigma(top, theta));

  long even = static_cast<long>(std::floor(plan.image_lo)) + 1;
  if (even % 2 != 0) ++even;
  if (!(static_cast<double>(even) < plan.image_hi)) {
    std::ostringstream os;
    os << "no even integer in (" << plan.image_lo << ", " << plan.image_hi << ") for k=" << k;
    throw InternalError(os.str());
  }
  plan.even_target = even;
  const double target = static_cast<double>(even) / k;
  auto f = [&](double s) { return s + tau_of_sigma(s, theta) - target; };
  auto df = [&](double s) { return 1.0 + tau_prime(s, theta); };
  RootConfig cfg;
  cfg.lo = c;
  cfg.hi = top;
  cfg.abs_tol = 1e-14;
  plan.sigma = solve_bracketed(f, df, cfg);
  plan.tau = tau_of_sigma(plan.sigma, theta);
  if (!(plan.sigma > c && plan.sigma < top) || !(plan.tau > 0 && plan.tau < plan.sigma)) {
    throw InternalError("sigma_even_plan produced sigma outside (c, c + 4/k)");
  }
  return plan;
}

}  // namespace circlekit
