#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anomalous/phaseplane.hpp"

namespace anomalous {

struct IntegrationControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.1;
  double max_param = 200.0;      // span in the orbit parameter
  double u_escape = 1e6;         // escape radius
  double capture_radius = 1e-6;  // capture ball around target points
};

enum class EventKind {
  axis_crossing_down,  // second coordinate + -> -
  axis_crossing_up,    // second coordinate - -> +
  captured_by_point,
  escaped,
  param_exhausted,
};

std::string to_string(EventKind k);

struct OrbitEvent {
  EventKind kind = EventKind::param_exhausted;
  double param_value = 0.0;
  PhasePoint state;
  std::optional<PointId> captured_id;
  // Ordinal among this orbit's crossings, so callers can pick the first
  // downward crossing of a spiraling orbit. -1 for non-crossing events.
  int crossing_index = -1;
};

struct CaptureTarget {
  PointId id;
  PhasePoint where;
};

/// Which events terminate the integration. Every event is logged whether or
/// not it stops the orbit; capture targets always stop.
struct StopSet {
  bool on_crossing_down = false;
  bool on_crossing_up = false;
  bool on_escape = true;
  std::vector<CaptureTarget> captures;
};

enum class TimeDirection { forward, backward };

struct LaunchInfo {
  std::optional<PointId> from;
  std::array<double, 2> eigenvector{0.0, 0.0};
  double offset = 0.0;
};

/// One accepted step with the data needed for 4th-order dense output.
struct OrbitStep {
  double t0 = 0.0, h = 0.0;
  PhasePoint y0, y1;
  PhasePoint f0, f1;  // field at the endpoints
  PhasePoint r5;      // highest dense-output coefficient
};

/// A numerically integrated trajectory. The parameter is the integrator's
/// own non-negative time; for backward orbits it measures -eta_bar from the
/// start point (the field is negated, steps stay positive).
struct Orbit {
  SystemVariant variant = SystemVariant::UV;
  TimeDirection direction = TimeDirection::forward;
  std::vector<std::pair<double, PhasePoint>> samples;  // strictly increasing
  std::vector<OrbitEvent> events;
  LaunchInfo launch;
  std::vector<OrbitStep> steps;

  /// Dense state at any parameter inside the integrated span.
  PhasePoint dense(double t) const;
  const OrbitEvent* first_event(EventKind kind) const;
  double end_param() const { return samples.empty() ? 0.0 : samples.back().first; }
};

/// Adaptive embedded 5(4) integration with event detection. Terminates on
/// the first stop-matching event or when max_param is exhausted. Throws
/// StepFailure if the step size underflows.
Orbit integrate_orbit(const VectorField& field, PhasePoint start,
                      TimeDirection direction,
                      const IntegrationControls& controls,
                      const StopSet& stop);

/// Re-locates a crossing event on the dense output by bisection until the
/// event function (the second coordinate) is below 1e-12 in magnitude.
/// Non-crossing events are returned unchanged. Throws BracketLost if the
/// sign change has disappeared.
OrbitEvent refine_event(const Orbit& orbit, const OrbitEvent& event);

}  // namespace anomalous
