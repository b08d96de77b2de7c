#pragma once

#include <optional>
#include <vector>

#include "anomalous/integrate.hpp"
#include "anomalous/profiles.hpp"

namespace anomalous {

enum class SeparatrixId { l0, l1 };

/// First-intersection measurement of a separatrix with the U axis.
///  - Finite: U coordinate of the crossing (necessarily > 1)
///  - FromP2: the orbit was captured by P2 first; reported as U = 1
///  - Infinite: the orbit escaped without crossing (only possible for l0)
struct CrossingMeasure {
  enum class Kind { Finite, FromP2, Infinite };
  Kind kind = Kind::Finite;
  double value = 0.0;
  Orbit orbit;
};

/// g(K) = U0(K) - U1(K); +infinity stands for "greater than any finite
/// value" in the bisection ordering and is never combined arithmetically.
struct GValue {
  double value = 0.0;
  bool finite = true;
};

struct BracketPoint {
  double K = 0.0;
  double g = 0.0;
  bool g_finite = true;
};

/// Outcome of the saddle-saddle connection search.
struct ShootingResult {
  double K_star = 0.0;
  ExponentPair exponents;
  /// Canonical P0 -> P1 orbit in the working renormalized chart, assembled
  /// from the two separatrices at K_star (samples only; no dense data).
  Orbit connection;
  std::vector<BracketPoint> bracket_history;
  /// |U0 - U1| on the V = 0 section at K_star.
  double residual = 0.0;
  /// True when the search ran on the sign-reduced system (alpha < 0 branch).
  bool mirrored = false;
};

/// The separatrix l0 (out of P0, forward) or l1 (into P1, traced backward),
/// launched from the saddle along its distinguished eigenvector with an
/// offset of 1e-6 relative to max(1, |V(saddle)|).
/// Requires the low-subcritical regime; the alpha < 0 branch goes through
/// solve_anomalous.
Orbit launch_separatrix(const ModelParams& params, double K, SeparatrixId id,
                        const IntegrationControls& controls = {});

/// U at the first downward axis crossing of l0 (Infinite if it escapes
/// first, FromP2 if P2 captures it with no prior crossing).
CrossingMeasure crossing_u0(const ModelParams& params, double K,
                            const IntegrationControls& controls = {});

/// U at the last axis crossing of l1 before P1 (the first one met in
/// backward time), or FromP2 when l1 comes straight from P2.
CrossingMeasure crossing_u1(const ModelParams& params, double K,
                            const IntegrationControls& controls = {});

GValue g_of_k(const ModelParams& params, double K,
              const IntegrationControls& controls = {});

/// Locates the unique sign change of g by geometric bracket expansion from
/// the hint (default K = 1) followed by bisection to relative width 1e-10.
/// Requires the low-subcritical regime. Throws BracketNotFound if the
/// expansion exhausts [1e-8, 1e8].
ShootingResult find_k_star(const ModelParams& params,
                           std::optional<double> bracket_hint = std::nullopt,
                           const IntegrationControls& controls = {});

/// The unique eternal self-similar solution for the given parameters:
/// direct shooting below m_s, the sign-reduced system above it, the
/// explicit stationary solution at m_s. Throws NoEternalSolutions for
/// m >= m_c.
EternalSolution solve_anomalous(const ModelParams& params,
                                const IntegrationControls& controls = {},
                                const ProfileOptions& profile_options = {});

/// Same, returning the shooting diagnostics alongside the solution.
struct AnomalousBranch {
  EternalSolution solution;
  std::optional<ShootingResult> shooting;  // absent on the Sobolev branch
};
AnomalousBranch solve_anomalous_detailed(
    const ModelParams& params, const IntegrationControls& controls = {},
    const ProfileOptions& profile_options = {});

namespace detail {

/// Bracket expansion on a monotone-decreasing sign structure; exposed for
/// direct testing. Returns (K_lo, K_hi) with g(K_lo) > 0 >= g(K_hi).
std::pair<double, double> expand_bracket(
    const std::function<GValue(double)>& g, double K_start,
    std::vector<BracketPoint>* history);

/// Core engine: mirror = true negates C_s (the alpha < 0 reduction).
ShootingResult shoot_connection(const ModelParams& params, bool mirror,
                                std::optional<double> bracket_hint,
                                const IntegrationControls& controls);

Orbit launch(const ModelParams& params, double K, SeparatrixId id, bool mirror,
             const IntegrationControls& controls, bool stop_for_measure);

CrossingMeasure measure_u0(const ModelParams& params, double K, bool mirror,
                           const IntegrationControls& controls);
CrossingMeasure measure_u1(const ModelParams& params, double K, bool mirror,
                           const IntegrationControls& controls);
GValue g_value(const ModelParams& params, double K, bool mirror,
               const IntegrationControls& controls);

}  // namespace detail

}  // namespace anomalous
