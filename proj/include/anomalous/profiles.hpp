#pragma once

#include <functional>
#include <vector>

#include "anomalous/integrate.hpp"
#include "anomalous/params.hpp"

namespace anomalous {

struct TailFit {
  double C = 0.0;      // f ~ C xi^slope for large xi
  double slope = 0.0;  // expected -(N-2)/m for connection profiles
};

/// Sampled self-similar profile f(xi) with derivative data and a fitted
/// power tail. The grid opens with the xi = 0 anchor, is uniform in
/// log(xi) afterwards, and the profile is normalized to f(0) = 1 unless
/// flagged otherwise. Immutable after construction; the evaluators are
/// pure.
struct Profile {
  std::vector<double> xi;  // increasing; xi.front() == 0
  std::vector<double> f;   // positive
  std::vector<double> df;  // f'
  bool normalized_f0 = true;
  TailFit tail;

  /// C^1 evaluation: Hermite inside the grid, fitted power law beyond it,
  /// quadratic touch-down below the first positive node.
  double value(double x) const;
  double derivative(double x) const;
  std::size_t size() const { return xi.size(); }
};

/// u(x,t) = e^{alpha t} f(|x| e^{-beta t}) with signed exponents.
struct EternalSolution {
  ModelParams params;
  ExponentPair exponents;
  Profile profile;
};

struct ProfileOptions {
  int points = 5001;  // resampling density over the orbit span
};

/// Converts a P0 -> P1 connection orbit in the renormalized chart into the
/// profile it contains. xi is recovered through the logarithmic parameter
/// (xi = xi_a e^{d (eta_bar - eta_bar_a)}), f through the definition of the
/// first chart coordinate, and the anchor is placed with the near-P0
/// asymptotics X ~ (alpha/2m) xi^2 so that f(0) = 1.
/// Throws DegenerateOrbit if the orbit does not start in the P0 regime.
Profile reconstruct_profile(const Orbit& connection, const ModelParams& params,
                            const ExponentPair& exponents,
                            const ProfileOptions& options = {});

/// Max over the interior grid of the profile-equation defect
///   (f^m)'' + (N-1)/xi (f^m)' - alpha f + beta xi f' + xi^sigma f^p,
/// each point normalized by the largest participating term. The second
/// derivative comes from 4th-order finite differences in log(xi); first
/// derivatives use the stored f'.
double ode_residual(const Profile& profile, const ModelParams& params,
                    const ExponentPair& exponents);

/// e^{alpha t} f(x_radius e^{-beta t}).
double evaluate_solution(const EternalSolution& sol, double x_radius,
                         double t);

struct MassResult {
  double M = 0.0;     // total mass at time t
  double rate = 0.0;  // d/dt log M = alpha + N beta = N(m - m_c) alpha / 2
};

/// Mass of the solution at time t: the grid integral of f xi^{N-1} plus the
/// fitted-tail remainder, scaled by the unit sphere area and the exponential
/// time factor. Throws NonIntegrableTail if the fitted slope is >= -N.
MassResult mass(const EternalSolution& sol, double t);

/// Builds a Profile by sampling closed-form f and f' on a log-uniform grid.
/// Used for the explicit solutions; anchor_zero adds the xi = 0 node with
/// the supplied values.
Profile sample_profile(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double xi_min,
                       double xi_max, int points, bool anchor_zero = false,
                       double f0 = 1.0);

/// Area of the unit sphere in dimension N (analytic in N).
double unit_sphere_area(double N);

/// Least-squares power law log f ~ log C + slope log xi over the last
/// decade of the grid.
TailFit fit_power_tail(const std::vector<double>& xi,
                       const std::vector<double>& f);

}  // namespace anomalous
