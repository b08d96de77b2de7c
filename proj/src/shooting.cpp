#include "anomalous/shooting.hpp"

#include <algorithm>
#include <cmath>

#include "anomalous/closedform.hpp"

namespace anomalous {

namespace detail {

namespace {

struct SaddleData {
  double b = 0.0;                  // V coordinate of the saddle
  std::array<double, 2> e1{0, 0};  // unit eigenvector of the slow direction
};

// Distinguished eigenvector at P = (0, b): e1 = ((C_s m + b(m+1))/(m b C_K), 1).
SaddleData saddle_data(const ModelParams& params, const RenCoefficients& ren,
                       double C_s, PointId which) {
  SaddleData out;
  const double root = std::sqrt(C_s * C_s + 4.0);
  out.b = which == PointId::P0 ? (-C_s + root) / 2.0 : (-C_s - root) / 2.0;
  const double m = params.m;
  const double ex = (C_s * m + out.b * (m + 1.0)) / (m * out.b * ren.C_K);
  const double norm = std::hypot(ex, 1.0);
  out.e1 = {ex / norm, 1.0 / norm};
  return out;
}

PhasePoint p2_location() { return {1.0, 0.0}; }

// Resamples an orbit through its dense output at spacing <= dt, ending
// exactly on the final (event-truncated) sample. Keeps the profile
// reconstruction free of sample-interpolation error.
std::vector<std::pair<double, PhasePoint>> densify(const Orbit& orbit,
                                                   double dt) {
  std::vector<std::pair<double, PhasePoint>> out;
  const double t_end = orbit.end_param();
  for (const OrbitStep& s : orbit.steps) {
    if (s.t0 >= t_end) break;
    const double h = std::min(s.h, t_end - s.t0);
    const int ns = std::max(1, static_cast<int>(std::ceil(h / dt)));
    for (int j = 0; j < ns; ++j) {
      const double t = s.t0 + h * j / ns;
      out.emplace_back(t, orbit.dense(t));
    }
  }
  out.push_back(orbit.samples.back());
  return out;
}

// Local stable/unstable manifold of the saddle at (0, b): points
// P + delta e1 with delta shrinking geometrically toward the saddle. The
// trajectory deviates from the eigenline only at O(delta^2), so these
// samples extend a separatrix to depths integration cannot reach.
struct ManifoldTail {
  std::vector<std::pair<double, PhasePoint>> pts;  // s measured from depth 0
  double span = 0.0;
};

ManifoldTail manifold_tail(const SaddleData& sd, const ModelParams& params,
                           double eps, double depth_ratio, double ds) {
  ManifoldTail out;
  const double rate = std::abs((1.0 - params.m) / params.m * sd.b);
  out.span = std::log(1.0 / depth_ratio) / rate;
  const int n = static_cast<int>(std::ceil(out.span / ds));
  out.pts.reserve(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double s = out.span * j / n;  // s = out.span is the launch point
    const double delta = eps * depth_ratio * std::exp(rate * s);
    out.pts.emplace_back(
        s, PhasePoint{delta * sd.e1[0], sd.b + delta * sd.e1[1]});
  }
  return out;
}

}  // namespace

Orbit launch(const ModelParams& params, double K, SeparatrixId id, bool mirror,
             const IntegrationControls& controls, bool stop_for_measure) {
  const RenCoefficients ren = renormalized_coefficients(params, K);
  const double C_s = mirror ? -ren.C_s : ren.C_s;
  const VectorField field = uv_field_raw(params, C_s, ren.C_K);

  const PointId from = id == SeparatrixId::l0 ? PointId::P0 : PointId::P1;
  const SaddleData sd = saddle_data(params, ren, C_s, from);
  const double eps = 1e-6 * std::max(1.0, std::abs(sd.b));
  PhasePoint start{eps * sd.e1[0], sd.b + eps * sd.e1[1]};

  StopSet stop;
  stop.captures.push_back({PointId::P2, p2_location()});
  if (stop_for_measure) {
    if (id == SeparatrixId::l0) {
      stop.on_crossing_down = true;  // first intersection with the U axis
    } else {
      stop.on_crossing_down = true;  // first crossing met in backward time
      stop.on_crossing_up = true;
    }
  } else {
    // Tracing toward the opposite saddle for the connection assembly.
    stop.captures.push_back(
        {id == SeparatrixId::l0 ? PointId::P1 : PointId::P0,
         {0.0, id == SeparatrixId::l0
                   ? saddle_data(params, ren, C_s, PointId::P1).b
                   : saddle_data(params, ren, C_s, PointId::P0).b}});
  }

  Orbit orbit = integrate_orbit(
      field, start,
      id == SeparatrixId::l0 ? TimeDirection::forward : TimeDirection::backward,
      controls, stop);
  orbit.launch = LaunchInfo{from, sd.e1, eps};
  return orbit;
}

CrossingMeasure measure_u0(const ModelParams& params, double K, bool mirror,
                           const IntegrationControls& controls) {
  CrossingMeasure out;
  out.orbit = launch(params, K, SeparatrixId::l0, mirror, controls, true);
  if (const OrbitEvent* ev =
          out.orbit.first_event(EventKind::axis_crossing_down)) {
    out.kind = CrossingMeasure::Kind::Finite;
    out.value = ev->state.u;
    return out;
  }
  if (out.orbit.first_event(EventKind::captured_by_point)) {
    // P2 sits on the axis at U = 1; capture with no prior crossing counts
    // as meeting the axis there.
    out.kind = CrossingMeasure::Kind::FromP2;
    out.value = 1.0;
    return out;
  }
  if (out.orbit.first_event(EventKind::escaped)) {
    out.kind = CrossingMeasure::Kind::Infinite;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  throw StepFailure("l0 exhausted its parameter span without an event");
}

CrossingMeasure measure_u1(const ModelParams& params, double K, bool mirror,
                           const IntegrationControls& controls) {
  CrossingMeasure out;
  out.orbit = launch(params, K, SeparatrixId::l1, mirror, controls, true);
  const OrbitEvent* down = out.orbit.first_event(EventKind::axis_crossing_down);
  const OrbitEvent* up = out.orbit.first_event(EventKind::axis_crossing_up);
  const OrbitEvent* ev = down && up ? (down->param_value < up->param_value ? down : up)
                                    : (down ? down : up);
  if (ev) {
    out.kind = CrossingMeasure::Kind::Finite;
    out.value = ev->state.u;
    return out;
  }
  if (out.orbit.first_event(EventKind::captured_by_point)) {
    out.kind = CrossingMeasure::Kind::FromP2;
    out.value = 1.0;
    return out;
  }
  throw StepFailure("l1 exhausted its parameter span without an event");
}

GValue g_value(const ModelParams& params, double K, bool mirror,
               const IntegrationControls& controls) {
  const CrossingMeasure u0 = measure_u0(params, K, mirror, controls);
  if (u0.kind == CrossingMeasure::Kind::Infinite) return {0.0, false};
  const CrossingMeasure u1 = measure_u1(params, K, mirror, controls);
  return {u0.value - u1.value, true};
}

std::pair<double, double> expand_bracket(
    const std::function<GValue(double)>& g, double K_start,
    std::vector<BracketPoint>* history) {
  constexpr double kMin = 1e-8, kMax = 1e8;
  auto probe = [&](double K) {
    const GValue v = g(K);
    if (history) history->push_back({K, v.finite ? v.value : 0.0, v.finite});
    return v;
  };
  double K = std::clamp(K_start, kMin, kMax);
  const GValue v = probe(K);
  const bool positive = !v.finite || v.value > 0.0;
  // g decreases in K: positive g means the root lies above K.
  double cursor = K;
  while (true) {
    cursor = positive ? cursor * 2.0 : cursor / 2.0;
    if (cursor > kMax || cursor < kMin)
      throw BracketNotFound(
          "no sign change of g(K) inside [1e-8, 1e8]; check the regime");
    const GValue w = probe(cursor);
    const bool w_pos = !w.finite || w.value > 0.0;
    if (w_pos != positive)
      return positive ? std::pair{K, cursor} : std::pair{cursor, K};
    K = cursor;
  }
}

ShootingResult shoot_connection(const ModelParams& params, bool mirror,
                                std::optional<double> bracket_hint,
                                const IntegrationControls& controls) {
  ShootingResult result;
  result.mirrored = mirror;
  auto g = [&](double K) { return g_value(params, K, mirror, controls); };

  auto [K_lo, K_hi] =
      expand_bracket(g, bracket_hint.value_or(1.0), &result.bracket_history);

  // Geometric bisection to relative width 1e-10 (g > 0 at K_lo).
  while (K_hi / K_lo - 1.0 > 1e-10) {
    const double K_mid = std::sqrt(K_lo * K_hi);
    const GValue v = g(K_mid);
    result.bracket_history.push_back({K_mid, v.finite ? v.value : 0.0, v.finite});
    if (!v.finite || v.value > 0.0)
      K_lo = K_mid;
    else
      K_hi = K_mid;
  }
  result.K_star = std::sqrt(K_lo * K_hi);
  result.exponents = exponents_from_k(params, result.K_star, mirror ? -1 : 1);

  // Assemble the connection from the two separatrices at K_star. The
  // assembly runs use tightened tolerances: the profile defect test takes
  // second derivatives of this data, which magnifies interpolation error
  // near the saddles.
  IntegrationControls tight = controls;
  tight.rel_tol = std::min(controls.rel_tol, 1e-12);
  tight.abs_tol = std::min(controls.abs_tol, 1e-16);
  tight.max_step = std::min(controls.max_step, 0.05);
  const CrossingMeasure u0 = measure_u0(params, result.K_star, mirror, tight);
  const CrossingMeasure u1 = measure_u1(params, result.K_star, mirror, tight);
  if (u0.kind != CrossingMeasure::Kind::Finite ||
      u1.kind != CrossingMeasure::Kind::Finite)
    throw StepFailure("separatrices fail to reach the matching section at K*");
  result.residual = std::abs(u0.value - u1.value);

  // l0 runs P0 -> (U0, 0) forward; l1 was traced backward from P1, so its
  // reverse runs (U1, 0) -> P1. Concatenate on the shared section, padding
  // both saddle ends with their local manifolds so the profile reaches the
  // asymptotic regimes integration alone cannot (launch offsets are 1e-6).
  const RenCoefficients ren = renormalized_coefficients(params, result.K_star);
  const double C_s_eff = mirror ? -ren.C_s : ren.C_s;
  const SaddleData sd1 = saddle_data(params, ren, C_s_eff, PointId::P1);
  // The P1-side tail is safe to extend deeply: the log-slope limit is
  // nonzero there, so V quantization against v1 never dominates the
  // signal. The P0 side stays at the launch offset (its slope signal
  // vanishes at the saddle and would drown in roundoff).
  constexpr double kDepthRatio = 1e-14;
  constexpr double kTailStep = 0.05;
  constexpr double kDenseStep = 0.002;
  const ManifoldTail tail = manifold_tail(
      sd1, params, 1e-6 * std::max(1.0, std::abs(sd1.b)), kDepthRatio,
      kTailStep);

  Orbit conn;
  conn.variant = SystemVariant::UV;
  conn.direction = TimeDirection::forward;
  conn.launch = u0.orbit.launch;
  conn.samples = densify(u0.orbit, kDenseStep);

  const double s_join = conn.samples.back().first;
  const auto b = densify(u1.orbit, kDenseStep);
  const double s_end = b.back().first;
  // Backward parameter tau' measures -eta_bar from P1, so the physical
  // forward order retraces it from the crossing (tau' = s_end) to P1.
  for (std::size_t k = b.size(); k-- > 1;) {
    const double s = s_join + (s_end - b[k - 1].first);
    conn.samples.emplace_back(s, b[k - 1].second);
  }
  // P1-side manifold, walked inward from the l1 launch point.
  const double s_p1 = conn.samples.back().first;
  for (std::size_t j = tail.pts.size() - 1; j-- > 0;) {
    conn.samples.emplace_back(s_p1 + (tail.span - tail.pts[j].first),
                              tail.pts[j].second);
  }

  if (mirror) {
    // Undo the sign reduction: (V, eta) -> (-V, -eta) maps the mirrored
    // trajectories onto the working chart of the alpha < 0 ansatz.
    std::vector<std::pair<double, PhasePoint>> flipped;
    flipped.reserve(conn.samples.size());
    const double s_last = conn.samples.back().first;
    for (std::size_t k = conn.samples.size(); k-- > 0;) {
      const auto& [s, pt] = conn.samples[k];
      flipped.emplace_back(s_last - s, PhasePoint{pt.u, -pt.v});
    }
    conn.samples = std::move(flipped);
  }
  result.connection = std::move(conn);
  return result;
}

}  // namespace detail

namespace {

void require_low_subcritical(const ModelParams& params) {
  if (params.regime != Regime::LowSubcritical)
    throw DomainError(
        "direct shooting covers 0 < m < m_s; other regimes go through "
        "solve_anomalous");
}

}  // namespace

Orbit launch_separatrix(const ModelParams& params, double K, SeparatrixId id,
                        const IntegrationControls& controls) {
  require_low_subcritical(params);
  return detail::launch(params, K, id, false, controls, true);
}

CrossingMeasure crossing_u0(const ModelParams& params, double K,
                            const IntegrationControls& controls) {
  require_low_subcritical(params);
  return detail::measure_u0(params, K, false, controls);
}

CrossingMeasure crossing_u1(const ModelParams& params, double K,
                            const IntegrationControls& controls) {
  require_low_subcritical(params);
  return detail::measure_u1(params, K, false, controls);
}

GValue g_of_k(const ModelParams& params, double K,
              const IntegrationControls& controls) {
  require_low_subcritical(params);
  return detail::g_value(params, K, false, controls);
}

ShootingResult find_k_star(const ModelParams& params,
                           std::optional<double> bracket_hint,
                           const IntegrationControls& controls) {
  require_low_subcritical(params);
  return detail::shoot_connection(params, false, bracket_hint, controls);
}

AnomalousBranch solve_anomalous_detailed(const ModelParams& params,
                                         const IntegrationControls& controls,
                                         const ProfileOptions& profile_options) {
  AnomalousBranch out;
  switch (params.regime) {
    case Regime::NoEternal:
      throw NoEternalSolutions(
          "no eternal self-similar solutions for m >= m_c");
    case Regime::Sobolev: {
      out.solution = stationary_sobolev_solution(params);
      return out;
    }
    case Regime::LowSubcritical:
    case Regime::HighSubcritical: {
      const bool mirror = params.regime == Regime::HighSubcritical;
      ShootingResult res =
          detail::shoot_connection(params, mirror, std::nullopt, controls);
      EternalSolution sol;
      sol.params = params;
      sol.exponents = res.exponents;
      sol.profile = reconstruct_profile(res.connection, params, res.exponents,
                                        profile_options);
      out.solution = std::move(sol);
      out.shooting = std::move(res);
      return out;
    }
  }
  throw DomainError("unreachable regime");
}

EternalSolution solve_anomalous(const ModelParams& params,
                                const IntegrationControls& controls,
                                const ProfileOptions& profile_options) {
  return solve_anomalous_detailed(params, controls, profile_options).solution;
}

}  // namespace anomalous
