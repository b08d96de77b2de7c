#pragma once

#include <functional>

#include "anomalous/profiles.hpp"

namespace anomalous {

/// Radial stationary solution at m = m_s(N):
///   u(r) = [(N^2-4)(p+m_s) D / (1 + D r^L)^2]^{1/(p-m_s)},
///   L = ((N+2) p - (N-2)) / 2,  D > 0 free.
/// u'(0) = 0 and u ~ C r^{-(N+2)} at infinity.
struct StationarySobolev {
  double N = 0.0, p = 0.0, D = 0.0;
  double L = 0.0;
  double u0 = 0.0;  // value at the origin
  double value(double r) const;
  double derivative(double r) const;
};

StationarySobolev stationary_sobolev(double N, double p, double D);

/// The D that normalizes u(0) = 1.
double stationary_sobolev_unit_D(double N, double p);

/// Stationary eternal solution (alpha = beta = 0) at the Sobolev exponent,
/// with the profile sampled and normalized to f(0) = 1.
EternalSolution stationary_sobolev_solution(const ModelParams& params);

/// The limit-system connection at m = m_s in closed form:
///   V^2 = 1 - (2m/(m+p)) U^{(p-m)/(1-m)},
/// returned as an evaluator U -> V^2. Requires the Sobolev regime.
std::function<double(double)> sobolev_connection_curve(
    const ModelParams& params);

/// U where the curve meets the axis: ((m+p)/2m)^{(1-m)/(p-m)}.
double sobolev_curve_axis_intercept(const ModelParams& params);

/// The pure power solution sitting at P2:
///   f(xi) = C xi^{-2/(1-m)},  C = [2mN(m_c-m)/(m-1)^2]^{1/(p-m)}.
/// Stationary in time regardless of the exponent pair.
struct P2PowerSolution {
  double C = 0.0;
  double exponent = 0.0;  // -2/(1-m)
  double value(double xi) const;
  double derivative(double xi) const;
};

P2PowerSolution p2_power_solution(const ModelParams& params);

/// Data of the exact saddle-saddle connection for m + p = 2:
/// the curve X = a W^{1/2} + b W in the rotated chart, with the parameter
/// values pinned by requiring the flow along the curve to vanish.
struct ConnectionBranch {
  double m = 0.0;  // m3 (primary) or m4 (sign-reduced branch)
  double a = 0.0;
  double b = 0.0;
  double K = 0.0;
  bool admissible = false;  // m in (0, m_c) and K > 2(m_c - m)/N
};

struct ExplicitConnectionConstants {
  double N = 0.0;
  double m1 = 0.0, m2 = 0.0;  // compatibility thresholds
  double m3 = 0.0, m4 = 0.0;  // roots of the quadratic below
  // f(m) = (N^2+8N+4) m^2 - (2N^2-16) m + (N-2)(N-6)
  double quad_a = 0.0, quad_b = 0.0, quad_c = 0.0;
  ConnectionBranch primary;  // at m3 (positive only for N > 6)
  ConnectionBranch mirror;   // at m4
  double f_of_m(double m) const;
};

/// All constants of the explicit connections for dimension N. Constants are
/// computed in closed form for any N >= 3; admissibility is flagged
/// (m3 > 0 needs N > 6).
ExplicitConnectionConstants explicit_connection_constants(double N);

/// Branch constants at an arbitrary m (for probing off-branch behavior).
ConnectionBranch connection_branch_at(double N, double m);

/// The curve X(W) = a W^{1/2} + b W on [0, (N-2)/m] and the normalized flow
/// defect of the rotated field along it. The defect vanishes identically
/// exactly on the m3/m4 branches; throws ConstraintViolated off-branch.
struct ExplicitConnectionOrbit {
  std::function<double(double)> X_of_W;
  std::function<double(double)> flow_residual;  // normalized, W in (0, W_max)
  double W_max = 0.0;                           // (N-2)/m
};

ExplicitConnectionOrbit explicit_connection_orbit(
    const ExplicitConnectionConstants& constants, const ConnectionBranch& branch);

enum class LineFamily { P0Q4, P1Q4 };

/// Exact profiles on invariant straight lines of the (X,Y) chart, existing
/// only for m + p = 2 at one K per family:
///   P0Q4 (K = 2(m_c-m)/N):
///     f(xi) = [C - alpha(1-m) xi^2 / (2mN)]^{-1/(1-m)}
///   P1Q4 (K = 2N(m_c-m) m^2 / (2m-N+2)^2):
///     f(xi) = xi^{-2/(1-m)} [ (1-m) alpha / (2(N-2-2m))
///                             + D xi^{N(m_c-m)/m} ]^{-1/(1-m)}
/// The caller's alpha must induce the family's K; ConstraintViolated
/// otherwise. For P1Q4 with D = 0 this is exactly the P2 power solution.
struct LineFamilyProfile {
  LineFamily family;
  double K = 0.0;
  double alpha = 0.0;
  double constant = 0.0;       // C for P0Q4, D for P1Q4
  double singular_xi = 0.0;    // vertical asymptote location, 0 if none
  double value(double xi) const;
  double derivative(double xi) const;

  double N_ = 0.0, m_ = 0.0;
};

LineFamilyProfile explicit_line_families(const ModelParams& params,
                                         LineFamily family, double constant,
                                         double alpha);

/// The alpha compatible with a given K on the positive branch.
double alpha_for_k(const ModelParams& params, double K);

/// Max deviation from zero of the conserved quantity
///   (1/2)[(w^m)_y]^2 - (mN(m_c-m)/(m-1)^2)(w^m)^2 + (m/(p+m)) w^{p+m},
/// with w(y) = r^{2/(1-m)} u(r), y = ln r, for a radial function sampled on
/// a log grid. Vanishes on stationary solutions at m = m_s.
double fisher_first_integral_check(const std::function<double(double)>& u,
                                   double N, double p, double r_min,
                                   double r_max, int points);

}  // namespace anomalous
