#include "anomalous/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anomalous {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights for the 4th-order interpolant.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

PhasePoint axpy(const PhasePoint& y, double h, double c1, const PhasePoint& k1,
                double c2 = 0, const PhasePoint& k2 = {}, double c3 = 0,
                const PhasePoint& k3 = {}, double c4 = 0,
                const PhasePoint& k4 = {}, double c5 = 0,
                const PhasePoint& k5 = {}, double c6 = 0,
                const PhasePoint& k6 = {}) {
  return {y.u + h * (c1 * k1.u + c2 * k2.u + c3 * k3.u + c4 * k4.u +
                     c5 * k5.u + c6 * k6.u),
          y.v + h * (c1 * k1.v + c2 * k2.v + c3 * k3.v + c4 * k4.v +
                     c5 * k5.v + c6 * k6.v)};
}

bool finite(const PhasePoint& p) {
  return std::isfinite(p.u) && std::isfinite(p.v);
}

double dist(const PhasePoint& a, const PhasePoint& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

PhasePoint dense_eval(const OrbitStep& s, double t) {
  const double theta = (t - s.t0) / s.h;
  const double th1 = 1.0 - theta;
  const PhasePoint ydiff{s.y1.u - s.y0.u, s.y1.v - s.y0.v};
  const PhasePoint bspl{s.h * s.f0.u - ydiff.u, s.h * s.f0.v - ydiff.v};
  const PhasePoint r4{ydiff.u - s.h * s.f1.u - bspl.u,
                      ydiff.v - s.h * s.f1.v - bspl.v};
  auto comp = [&](double y0, double yd, double bs, double r4c, double r5c) {
    return y0 + theta * (yd + th1 * (bs + theta * (r4c + th1 * r5c)));
  };
  return {comp(s.y0.u, ydiff.u, bspl.u, r4.u, s.r5.u),
          comp(s.y0.v, ydiff.v, bspl.v, r4.v, s.r5.v)};
}

// Locates a sign change of the second coordinate inside a step.
double bisect_crossing(const OrbitStep& s, double t_lo, double t_hi) {
  double v_lo = dense_eval(s, t_lo).v;
  for (int iter = 0; iter < 200; ++iter) {
    const double t_mid = 0.5 * (t_lo + t_hi);
    const double v_mid = dense_eval(s, t_mid).v;
    if (std::abs(v_mid) < 1e-12 || t_hi - t_lo < 1e-12) return t_mid;
    if ((v_lo < 0.0) == (v_mid < 0.0)) {
      t_lo = t_mid;
      v_lo = v_mid;
    } else {
      t_hi = t_mid;
    }
  }
  return 0.5 * (t_lo + t_hi);
}

}  // namespace

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::axis_crossing_down: return "axis_crossing_down";
    case EventKind::axis_crossing_up: return "axis_crossing_up";
    case EventKind::captured_by_point: return "captured_by_point";
    case EventKind::escaped: return "escaped";
    case EventKind::param_exhausted: return "param_exhausted";
  }
  return "?";
}

PhasePoint Orbit::dense(double t) const {
  if (steps.empty()) {
    if (samples.empty()) return {};
    // Assembled orbits carry samples only; fall back to the nearest one.
    auto it = std::lower_bound(
        samples.begin(), samples.end(), t,
        [](const auto& s, double val) { return s.first < val; });
    if (it == samples.end()) return samples.back().second;
    return it->second;
  }
  auto it = std::upper_bound(
      steps.begin(), steps.end(), t,
      [](double val, const OrbitStep& s) { return val < s.t0; });
  const OrbitStep& s = it == steps.begin() ? *it : *(it - 1);
  return dense_eval(s, std::clamp(t, s.t0, s.t0 + s.h));
}

const OrbitEvent* Orbit::first_event(EventKind kind) const {
  for (const auto& e : events)
    if (e.kind == kind) return &e;
  return nullptr;
}

Orbit integrate_orbit(const VectorField& field, PhasePoint start,
                      TimeDirection direction,
                      const IntegrationControls& controls,
                      const StopSet& stop) {
  const double sign = direction == TimeDirection::forward ? 1.0 : -1.0;
  auto f = [&](const PhasePoint& y) {
    PhasePoint v = field(y);
    return PhasePoint{sign * v.u, sign * v.v};
  };

  Orbit orbit;
  orbit.variant = field.variant();
  orbit.direction = direction;
  orbit.samples.emplace_back(0.0, start);

  int crossings = 0;
  bool done = false;
  bool escape_logged = false;

  auto record = [&](OrbitEvent ev, bool stops) {
    orbit.events.push_back(std::move(ev));
    if (stops) done = true;
  };

  // Immediate capture at the start point.
  for (const auto& target : stop.captures) {
    if (dist(start, target.where) < controls.capture_radius) {
      record({EventKind::captured_by_point, 0.0, start, target.id, -1}, true);
      return orbit;
    }
  }

  double t = 0.0;
  PhasePoint y = start;
  PhasePoint k1 = f(y);
  if (!finite(k1)) throw StepFailure("field not finite at start");

  double h = std::min(controls.max_step,
                      1e-2 * (1.0 + std::hypot(y.u, y.v)) /
                          std::max(std::hypot(k1.u, k1.v), 1e-8));
  double err_prev = 1.0;

  while (!done) {
    if (t >= controls.max_param) {
      record({EventKind::param_exhausted, t, y, std::nullopt, -1}, true);
      break;
    }
    h = std::min({h, controls.max_step, controls.max_param - t});
    if (h < 1e-13 * std::max(1.0, t)) {
      std::ostringstream os;
      os << "step size underflow at parameter " << t << ", state (" << y.u
         << ", " << y.v << ")";
      throw StepFailure(os.str());
    }

    const PhasePoint k2 = f(axpy(y, h, a21, k1));
    const PhasePoint k3 = f(axpy(y, h, a31, k1, a32, k2));
    const PhasePoint k4 = f(axpy(y, h, a41, k1, a42, k2, a43, k3));
    const PhasePoint k5 = f(axpy(y, h, a51, k1, a52, k2, a53, k3, a54, k4));
    const PhasePoint k6 =
        f(axpy(y, h, a61, k1, a62, k2, a63, k3, a64, k4, a65, k5));
    const PhasePoint y1 =
        axpy(y, h, b1, k1, 0.0, k2, b3, k3, b4, k4, b5, k5, b6, k6);
    const PhasePoint k7 = f(y1);

    bool reject = !finite(y1) || !finite(k7);
    double err = 0.0;
    if (!reject) {
      auto scaled = [&](double e, double y0c, double y1c) {
        return e / (controls.abs_tol +
                    controls.rel_tol * std::max(std::abs(y0c), std::abs(y1c)));
      };
      const double err_u = scaled(h * (e1 * k1.u + e3 * k3.u + e4 * k4.u +
                                       e5 * k5.u + e6 * k6.u + e7 * k7.u),
                                  y.u, y1.u);
      const double err_v = scaled(h * (e1 * k1.v + e3 * k3.v + e4 * k4.v +
                                       e5 * k5.v + e6 * k6.v + e7 * k7.v),
                                  y.v, y1.v);
      err = std::sqrt(0.5 * (err_u * err_u + err_v * err_v));
      reject = !(err <= 1.0);
    }

    if (reject) {
      const double fac =
          std::isfinite(err) && err > 0.0
              ? std::max(0.2, 0.9 * std::pow(err, -0.2))
              : 0.2;
      h *= std::min(fac, 0.9);
      continue;
    }

    // Accepted: store the step with its dense-output coefficient.
    OrbitStep step;
    step.t0 = t;
    step.h = h;
    step.y0 = y;
    step.y1 = y1;
    step.f0 = k1;
    step.f1 = k7;
    step.r5 = {h * (d1 * k1.u + d3 * k3.u + d4 * k4.u + d5 * k5.u +
                    d6 * k6.u + d7 * k7.u),
               h * (d1 * k1.v + d3 * k3.v + d4 * k4.v + d5 * k5.v +
                    d6 * k6.v + d7 * k7.v)};
    orbit.steps.push_back(step);

    const double t1 = t + h;

    // Crossing of the axis v = 0 inside the accepted step.
    if ((y.v < 0.0) != (y1.v < 0.0) && y.v != 0.0) {
      const double tc = bisect_crossing(step, t, t1);
      PhasePoint yc = dense_eval(step, tc);
      yc.v = 0.0;
      const bool down = y.v > 0.0;
      OrbitEvent ev{down ? EventKind::axis_crossing_down
                         : EventKind::axis_crossing_up,
                    tc, yc, std::nullopt, crossings++};
      const bool stops =
          down ? stop.on_crossing_down : stop.on_crossing_up;
      if (stops) {
        const double t_prev = orbit.samples.back().first;
        orbit.samples.emplace_back(
            tc > t_prev ? tc : std::nextafter(t_prev, t1), yc);
        record(ev, true);
        break;
      }
      record(ev, false);
    }

    t = t1;
    y = y1;
    k1 = k7;  // first-same-as-last
    orbit.samples.emplace_back(t, y);

    for (const auto& target : stop.captures) {
      if (dist(y, target.where) < controls.capture_radius) {
        record({EventKind::captured_by_point, t, y, target.id, -1}, true);
        break;
      }
    }
    if (done) break;

    if (!escape_logged &&
        std::max(std::abs(y.u), std::abs(y.v)) > controls.u_escape) {
      escape_logged = true;
      record({EventKind::escaped, t, y, std::nullopt, -1}, stop.on_escape);
      if (done) break;
    }

    // PI step-size controller.
    double fac;
    if (err <= 1e-30) {
      fac = 10.0;
    } else {
      fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 10.0);
    }
    err_prev = std::max(err, 1e-30);
    h *= fac;
  }

  return orbit;
}

OrbitEvent refine_event(const Orbit& orbit, const OrbitEvent& event) {
  if (event.kind != EventKind::axis_crossing_down &&
      event.kind != EventKind::axis_crossing_up)
    return event;
  if (orbit.steps.empty())
    throw BracketLost("orbit carries no dense-output data");
  auto it = std::upper_bound(
      orbit.steps.begin(), orbit.steps.end(), event.param_value,
      [](double val, const OrbitStep& s) { return val < s.t0; });
  const OrbitStep& s = it == orbit.steps.begin() ? *it : *(it - 1);
  const double t_lo = s.t0, t_hi = s.t0 + s.h;
  const double v_lo = dense_eval(s, t_lo).v;
  const double v_hi = dense_eval(s, t_hi).v;
  if (v_lo != 0.0 && v_hi != 0.0 && (v_lo < 0.0) == (v_hi < 0.0))
    throw BracketLost("no sign change under dense output near the event");
  const double tc = bisect_crossing(s, t_lo, t_hi);
  OrbitEvent out = event;
  out.param_value = tc;
  out.state = dense_eval(s, tc);
  return out;
}

}  // namespace anomalous
