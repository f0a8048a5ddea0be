// xlcrf/lbfgs.hpp
//
// Copyright 2026  The xlcrf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Limited-memory BFGS minimizer: two-loop recursion over a bounded history
// of curvature pairs, strong Wolfe line search (bracket then zoom). The
// per-iteration callback sees every accepted iterate, which is what the
// trainer's early stopping hooks into.

#ifndef XLCRF_LBFGS_HPP_
#define XLCRF_LBFGS_HPP_

#include <cmath>
#include <deque>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace xlcrf {

/// Evaluates the function at x, writes the gradient, returns the value.
using LbfgsObjective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Observes each accepted iterate (1-based iteration index); returning
/// false stops the run with kCallbackStop.
using LbfgsCallback =
    std::function<bool(int iteration, std::span<const double> x, double value)>;

enum class LbfgsStatus {
  kConverged,         // relative objective change below tolerance
  kMaxIterations,     // iteration budget exhausted
  kCallbackStop,      // callback requested a stop
  kLineSearchFailed,  // no acceptable step along the search direction
  kDiverged,          // non-finite value or gradient at the current point
};

inline const char* to_string(LbfgsStatus s) {
  switch (s) {
    case LbfgsStatus::kConverged: return "converged";
    case LbfgsStatus::kMaxIterations: return "max_iterations";
    case LbfgsStatus::kCallbackStop: return "callback_stop";
    case LbfgsStatus::kLineSearchFailed: return "line_search_failed";
    case LbfgsStatus::kDiverged: return "diverged";
  }
  return "unknown";
}

struct LbfgsOptions {
  int history = 10;
  int max_iterations = 100;
  double convergence_tol = 1e-8;  // relative objective change, 0 disables
  double wolfe_c1 = 1e-4;         // sufficient decrease
  double wolfe_c2 = 0.9;          // curvature
  int max_line_search_steps = 50;
};

struct LbfgsResult {
  LbfgsStatus status = LbfgsStatus::kMaxIterations;
  int iterations = 0;  // accepted iterations
  double value = 0.0;  // objective at the final point
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct CurvaturePair {
  std::vector<double> s;  // x_{k+1} - x_k
  std::vector<double> y;  // g_{k+1} - g_k
  double rho = 0.0;       // 1 / (y . s)
};

/// d = -H g by the two-loop recursion, scaled by the latest pair.
inline void lbfgs_direction(const std::deque<CurvaturePair>& pairs,
                            std::span<const double> grad,
                            std::vector<double>& d) {
  d.assign(grad.begin(), grad.end());
  std::vector<double> alpha(pairs.size());
  for (size_t i = pairs.size(); i-- > 0;) {
    const auto& p = pairs[i];
    alpha[i] = p.rho * dot(p.s, d);
    for (size_t j = 0; j < d.size(); ++j) d[j] -= alpha[i] * p.y[j];
  }
  if (!pairs.empty()) {
    const auto& last = pairs.back();
    double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : d) v *= gamma;
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    double beta = p.rho * dot(p.y, d);
    for (size_t j = 0; j < d.size(); ++j) d[j] += (alpha[i] - beta) * p.s[j];
  }
  for (double& v : d) v = -v;
}

}  // namespace detail

/// Minimizes f starting from x (updated in place to the final point).
inline LbfgsResult lbfgs_minimize(std::vector<double>& x,
                                  const LbfgsObjective& f,
                                  const LbfgsOptions& opts = {},
                                  const LbfgsCallback& callback = nullptr) {
  if (opts.history < 1 || opts.max_iterations < 1)
    throw std::invalid_argument("lbfgs: history and max_iterations must be >= 1");
  const size_t dim = x.size();
  std::vector<double> grad(dim, 0.0), new_x(dim), new_grad(dim), direction(dim);
  double value = f(x, grad);
  if (!std::isfinite(value)) return {LbfgsStatus::kDiverged, 0, value};
  for (double g : grad)
    if (!std::isfinite(g)) return {LbfgsStatus::kDiverged, 0, value};

  std::deque<detail::CurvaturePair> pairs;
  LbfgsResult result;
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    detail::lbfgs_direction(pairs, grad, direction);
    double dg = detail::dot(direction, grad);
    if (!(dg < 0.0)) {
      // Not a descent direction; drop stale curvature and fall back.
      pairs.clear();
      for (size_t j = 0; j < dim; ++j) direction[j] = -grad[j];
      dg = detail::dot(direction, grad);
      if (!(dg < 0.0)) {
        // Zero gradient: already at a stationary point.
        result.status = LbfgsStatus::kConverged;
        result.value = value;
        return result;
      }
    }

    // Strong Wolfe line search: bracket, then bisection zoom.
    double gnorm = std::sqrt(detail::dot(grad, grad));
    double alpha = pairs.empty() ? std::min(1.0, 1.0 / std::max(1.0, gnorm)) : 1.0;
    double lo = 0.0, hi = -1.0;  // hi < 0 marks "no upper bracket yet"
    double phi_lo = value;
    double new_value = value;
    bool accepted = false;
    double prev_alpha = 0.0, prev_phi = value;
    for (int ls = 0; ls < opts.max_line_search_steps; ++ls) {
      for (size_t j = 0; j < dim; ++j) new_x[j] = x[j] + alpha * direction[j];
      new_value = f(new_x, new_grad);
      bool finite = std::isfinite(new_value);
      double dphi = finite ? detail::dot(new_grad, direction) : 0.0;
      if (hi < 0.0) {
        // Bracketing phase.
        if (!finite || new_value > value + opts.wolfe_c1 * alpha * dg ||
            (ls > 0 && new_value >= prev_phi)) {
          lo = prev_alpha;
          phi_lo = prev_phi;
          hi = alpha;
        } else if (std::abs(dphi) <= -opts.wolfe_c2 * dg) {
          accepted = true;
          break;
        } else if (dphi >= 0.0) {
          lo = alpha;
          phi_lo = new_value;
          hi = prev_alpha;
        } else {
          prev_alpha = alpha;
          prev_phi = new_value;
          alpha *= 2.0;
          continue;
        }
      } else {
        // Zoom phase on [lo, hi] (unordered interval).
        if (!finite || new_value > value + opts.wolfe_c1 * alpha * dg ||
            new_value >= phi_lo) {
          hi = alpha;
        } else if (std::abs(dphi) <= -opts.wolfe_c2 * dg) {
          accepted = true;
          break;
        } else {
          if (dphi * (hi - lo) >= 0.0) hi = lo;
          lo = alpha;
          phi_lo = new_value;
        }
      }
      alpha = 0.5 * (lo + hi);
      if (std::abs(hi - lo) < 1e-16 || alpha <= 0.0) break;
    }
    if (!accepted) {
      // Fall back to the best sufficient-decrease point if zoom found one.
      if (lo > 0.0 && phi_lo < value) {
        alpha = lo;
        for (size_t j = 0; j < dim; ++j) new_x[j] = x[j] + alpha * direction[j];
        new_value = f(new_x, new_grad);
        accepted = std::isfinite(new_value) && new_value < value;
      }
      if (!accepted) {
        result.status = LbfgsStatus::kLineSearchFailed;
        result.value = value;
        return result;
      }
    }
    for (double g : new_grad)
      if (!std::isfinite(g)) return {LbfgsStatus::kDiverged, iter, new_value};

    detail::CurvaturePair pair;
    pair.s.resize(dim);
    pair.y.resize(dim);
    for (size_t j = 0; j < dim; ++j) {
      pair.s[j] = new_x[j] - x[j];
      pair.y[j] = new_grad[j] - grad[j];
    }
    double sy = detail::dot(pair.s, pair.y);
    if (sy > 1e-12) {
      pair.rho = 1.0 / sy;
      pairs.push_back(std::move(pair));
      if (static_cast<int>(pairs.size()) > opts.history) pairs.pop_front();
    }

    double old_value = value;
    x.swap(new_x);
    grad.swap(new_grad);
    value = new_value;
    result.iterations = iter;
    result.value = value;

    if (callback && !callback(iter, x, value)) {
      result.status = LbfgsStatus::kCallbackStop;
      return result;
    }
    if (opts.convergence_tol > 0.0) {
      double denom = std::max({1.0, std::abs(old_value), std::abs(value)});
      if (std::abs(old_value - value) / denom < opts.convergence_tol) {
        result.status = LbfgsStatus::kConverged;
        return result;
      }
    }
  }
  result.status = LbfgsStatus::kMaxIterations;
  return result;
}

}  // namespace xlcrf

#endif  // XLCRF_LBFGS_HPP_
