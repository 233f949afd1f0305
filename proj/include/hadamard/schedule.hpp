#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hadamard/errors.hpp"

namespace hadamard {

/// Per-iteration weight sequences: alpha_n and beta_n for the single-mapping
/// iteration, plus the lambda/alpha/beta/gamma weight vectors for the
/// N-mapping system iteration.
class Schedule {
 public:
  using Scalar = std::function<double(int)>;
  using VectorSeq = std::function<std::vector<double>(int)>;

  static Schedule constant(double alpha, double beta) {
    Schedule s;
    s.n_maps_ = 1;
    s.alpha_ = [alpha](int) { return alpha; };
    s.beta_ = [beta](int) { return beta; };
    std::ostringstream os;
    os << "alpha=" << alpha << ", beta=" << beta;
    s.echo_ = os.str();
    return s;
  }

  static Schedule from_functions(Scalar alpha, Scalar beta, std::string echo = "custom") {
    Schedule s;
    s.n_maps_ = 1;
    s.alpha_ = std::move(alpha);
    s.beta_ = std::move(beta);
    s.echo_ = std::move(echo);
    return s;
  }

  /// System schedule with constant weight vectors. lambda, alpha, beta have
  /// one entry per mapping; gamma has N+1 entries (gamma[0] weights x_n).
  static Schedule system_constant(std::vector<double> lambda, std::vector<double> alpha,
                                  std::vector<double> beta, std::vector<double> gamma) {
    const std::size_t n = lambda.size();
    if (n == 0 || alpha.size() != n || beta.size() != n || gamma.size() != n + 1)
      throw DomainError("Schedule::system_constant: weight vector sizes are inconsistent");
    check_sum(lambda, 1.0, "lambda");
    double ab = 0.0;
    for (std::size_t i = 0; i < n; ++i) ab += alpha[i] + beta[i];
    if (std::abs(ab - 1.0) > 1e-9)
      throw DomainError("Schedule::system_constant: alpha+beta weights must sum to 1");
    check_sum(gamma, 1.0, "gamma");
    Schedule s;
    s.n_maps_ = static_cast<int>(n);
    s.lambda_ = [lambda](int) { return lambda; };
    s.alpha_vec_ = [alpha](int) { return alpha; };
    s.beta_vec_ = [beta](int) { return beta; };
    s.gamma_ = [gamma](int) { return gamma; };
    s.echo_ = "system, constant weights, N=" + std::to_string(n);
    return s;
  }

  /// Uniform system weights: lambda_i = 1/N, alpha_i = beta_i = 1/(2N),
  /// gamma_i = 1/(N+1).
  static Schedule system_uniform(int n_maps) {
    if (n_maps < 1) throw DomainError("Schedule::system_uniform: need at least one mapping");
    const auto n = static_cast<std::size_t>(n_maps);
    return system_constant(std::vector<double>(n, 1.0 / n_maps),
                           std::vector<double>(n, 0.5 / n_maps),
                           std::vector<double>(n, 0.5 / n_maps),
                           std::vector<double>(n + 1, 1.0 / (n_maps + 1)));
  }

  int map_count() const { return n_maps_; }
  bool is_system() const { return n_maps_ > 1 || static_cast<bool>(lambda_); }

  double alpha(int n) const { return require(alpha_, "alpha")(n); }
  double beta(int n) const { return require(beta_, "beta")(n); }
  std::vector<double> lambda_weights(int n) const { return require(lambda_, "lambda")(n); }
  std::vector<double> alpha_weights(int n) const { return require(alpha_vec_, "alpha_i")(n); }
  std::vector<double> beta_weights(int n) const { return require(beta_vec_, "beta_i")(n); }
  std::vector<double> gamma_weights(int n) const { return require(gamma_, "gamma")(n); }

  const std::string& echo() const { return echo_; }

  /// min over the first `horizon` indices of beta_n (1 - beta_n): the finite
  /// surrogate for the liminf hypothesis of the convergence theorems.
  double beta_liminf_surrogate(int horizon = 1000000) const {
    double worst = 1.0;
    for (int n = 0; n < horizon; ++n) {
      const double b = beta(n);
      if (!(b >= 0.0 && b <= 1.0)) throw DomainError("Schedule: beta_n outside [0,1]");
      worst = std::min(worst, b * (1.0 - b));
    }
    return worst;
  }

  /// Check the invariants for a run with the given [b,c] weight window.
  /// Single-mapping schedules need the liminf surrogate at least b(1-c);
  /// system schedules need unit sums and, for N >= 2, components in [b,c].
  void validate(double b_lo, double c_hi, int scalar_horizon = 1000000,
                int vector_horizon = 1000) const {
    if (!(b_lo > 0.0 && b_lo <= c_hi && c_hi < 1.0))
      throw DomainError("Schedule::validate: need 0 < b <= c < 1");
    if (is_system()) {
      for (int n = 0; n < vector_horizon; ++n) {
        const auto lam = lambda_weights(n);
        const auto av = alpha_weights(n);
        const auto bv = beta_weights(n);
        const auto gv = gamma_weights(n);
        check_sum(lam, 1.0, "lambda");
        check_sum(gv, 1.0, "gamma");
        double ab = 0.0;
        for (std::size_t i = 0; i < av.size(); ++i) ab += av[i] + bv[i];
        if (std::abs(ab - 1.0) > 1e-9) throw DomainError("Schedule: alpha+beta sum drifted from 1");
        if (n_maps_ >= 2) {
          auto in_window = [&](double w) { return w >= b_lo - 1e-12 && w <= c_hi + 1e-12; };
          for (double w : lam)
            if (!in_window(w)) throw DomainError("Schedule: lambda weight outside [b,c]");
          for (std::size_t i = 0; i < av.size(); ++i)
            if (!in_window(av[i]) || !in_window(bv[i]))
              throw DomainError("Schedule: alpha/beta weight outside [b,c]");
          for (double w : gv)
            if (!in_window(w)) throw DomainError("Schedule: gamma weight outside [b,c]");
        }
      }
    } else {
      for (int n = 0; n < std::min(scalar_horizon, 1000); ++n) {
        const double a = alpha(n);
        if (!(a >= 0.0 && a <= 1.0)) throw DomainError("Schedule: alpha_n outside [0,1]");
      }
      if (beta_liminf_surrogate(scalar_horizon) < b_lo * (1.0 - c_hi))
        throw DomainError("Schedule: liminf surrogate of beta_n(1-beta_n) is below b(1-c)");
    }
  }

 private:
  template <typename F>
  static const F& require(const F& f, const char* name) {
    if (!f) throw DomainError(std::string("Schedule: ") + name + " sequence not configured");
    return f;
  }

  static void check_sum(const std::vector<double>& w, double target, const char* name) {
    double s = 0.0;
    for (double v : w) {
      if (!(v >= 0.0 && v <= 1.0))
        throw DomainError(std::string("Schedule: ") + name + " component outside [0,1]");
      s += v;
    }
    if (std::abs(s - target) > 1e-9)
      throw DomainError(std::string("Schedule: ") + name + " weights must sum to 1");
  }

  int n_maps_ = 1;
  Scalar alpha_;
  Scalar beta_;
  VectorSeq lambda_;
  VectorSeq alpha_vec_;
  VectorSeq beta_vec_;
  VectorSeq gamma_;
  std::string echo_;
};

}  // namespace hadamard
