#include "anomalous/phaseplane.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace anomalous {

namespace {

// x^e with the domain clamped at 0; the X = 0 / U = 0 line is invariant,
// so negative first coordinates only ever arise as roundoff.
double pow_pos(double x, double e) { return std::pow(std::max(x, 0.0), e); }

constexpr double kEquilibriumResidual = 1e-10;
constexpr double kSumExactTol = 1e-12;   // |m+p-2| treated as exactly 2
constexpr double kSumIllCondTol = 1e-9;  // unsupported band around m+p=2

double sum_defect(const ModelParams& params) {
  return params.m + params.p - 2.0;
}

}  // namespace

std::string to_string(SystemVariant v) {
  switch (v) {
    case SystemVariant::XY_plus: return "xy";
    case SystemVariant::XY_minus: return "xy_mirror";
    case SystemVariant::UV: return "uv";
    case SystemVariant::UV_limit: return "uv_limit";
    case SystemVariant::RotatedXW: return "rotated_xw";
  }
  return "unknown";
}

std::string to_string(PointId id) {
  switch (id) {
    case PointId::P0: return "P0";
    case PointId::P1: return "P1";
    case PointId::P2: return "P2";
    case PointId::Q1: return "Q1";
    case PointId::Q2: return "Q2";
    case PointId::Q3: return "Q3";
    case PointId::Q4: return "Q4";
  }
  return "?";
}

std::string to_string(Chart chart) {
  switch (chart) {
    case Chart::finite: return "finite";
    case Chart::poincare_equator: return "poincare_equator";
    case Chart::local_yw: return "local_yw";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::saddle: return "saddle";
    case Stability::unstable_node: return "unstable_node";
    case Stability::stable_node: return "stable_node";
    case Stability::unstable_focus: return "unstable_focus";
    case Stability::stable_focus: return "stable_focus";
    case Stability::center_or_focus: return "center_or_focus";
    case Stability::saddle_node: return "saddle_node";
  }
  return "?";
}

std::string to_string(AsymptoticDescriptor::Kind k) {
  using Kind = AsymptoticDescriptor::Kind;
  switch (k) {
    case Kind::regular_origin: return "regular_origin";
    case Kind::tail_P1: return "tail_P1";
    case Kind::vertical_asymptote_origin_P2: return "vertical_asymptote_origin_P2";
    case Kind::tail_P2: return "tail_P2";
    case Kind::sign_change_Q2Q3: return "sign_change_Q2Q3";
    case Kind::asymptote_Q1Q4: return "asymptote_Q1Q4";
  }
  return "?";
}

PhasePoint VectorField::eval(const PhasePoint& x) const {
  const double m = m_, N = N_;
  switch (kind_) {
    case Kind::XYPlus: {
      const double X = x.u, Y = x.v;
      return {X * (2.0 + (1.0 - m) * Y),
              -m * Y * Y - (N - 2.0) * Y + 2.0 * X + (1.0 - m) * X * Y -
                  K_ * pow_pos(X, q_)};
    }
    case Kind::XYMinus: {
      const double X = x.u, Y = x.v;
      return {X * (2.0 + (1.0 - m) * Y),
              -m * Y * Y - (N - 2.0) * Y - 2.0 * X - (1.0 - m) * X * Y -
                  K_ * pow_pos(X, q_)};
    }
    case Kind::UV: {
      const double U = x.u, V = x.v;
      return {C_m_ * U * V,
              -V * V - C_s_ * V + 1.0 + C_K_ * U * V - pow_pos(U, q_)};
    }
    case Kind::RotatedXW: {
      const double X = x.u, W = x.v;
      const double E = (N + 2.0) * (m - (N - 2.0) / (N + 2.0)) / N;
      const double S = K_ + 2.0 * (m - (N - 2.0) / N) / N;
      return {(m - 1.0) * X * W - 2.0 * (m - 1.0) / N * X * X + 2.0 * X,
              m * W * W - (N - 2.0) * W - E * X * W + S * X * X};
    }
    case Kind::LocalYW: {
      // q_ holds r = (1-m)/(2-m-p) here; K_ is the shooting parameter.
      const double y = x.u, w = x.v;
      const double r = q_;
      const double wr = pow_pos(w, r);
      const double smp = (1.0 - m) / r;  // 2-m-p
      return {2.0 * wr + (1.0 - m) * y - N * y * wr - y * y - K_ * w,
              -smp * y * w - 2.0 * smp / (1.0 - m) * w * wr};
    }
  }
  return {};
}

Mat2 VectorField::jacobian(const PhasePoint& x) const {
  const double m = m_, N = N_;
  switch (kind_) {
    case Kind::XYPlus: {
      const double X = x.u, Y = x.v;
      return {2.0 + (1.0 - m) * Y, (1.0 - m) * X,
              2.0 + (1.0 - m) * Y - K_ * q_ * pow_pos(X, q_ - 1.0),
              -2.0 * m * Y - (N - 2.0) + (1.0 - m) * X};
    }
    case Kind::XYMinus: {
      const double X = x.u, Y = x.v;
      return {2.0 + (1.0 - m) * Y, (1.0 - m) * X,
              -2.0 - (1.0 - m) * Y - K_ * q_ * pow_pos(X, q_ - 1.0),
              -2.0 * m * Y - (N - 2.0) - (1.0 - m) * X};
    }
    case Kind::UV: {
      const double U = x.u, V = x.v;
      return {C_m_ * V, C_m_ * U,
              C_K_ * V - q_ * pow_pos(U, q_ - 1.0),
              -2.0 * V - C_s_ + C_K_ * U};
    }
    case Kind::RotatedXW: {
      const double X = x.u, W = x.v;
      const double E = (N + 2.0) * (m - (N - 2.0) / (N + 2.0)) / N;
      const double S = K_ + 2.0 * (m - (N - 2.0) / N) / N;
      return {(m - 1.0) * W - 4.0 * (m - 1.0) / N * X + 2.0, (m - 1.0) * X,
              -E * W + 2.0 * S * X, 2.0 * m * W - (N - 2.0) - E * X};
    }
    case Kind::LocalYW: {
      const double y = x.u, w = x.v;
      const double r = q_;
      const double smp = (1.0 - m) / r;
      const double wr = pow_pos(w, r);
      const double wrm1 = pow_pos(w, r - 1.0);
      return {(1.0 - m) - N * wr - 2.0 * y,
              2.0 * r * wrm1 - N * y * r * wrm1 - K_,
              -smp * w,
              -smp * y - 2.0 * smp / (1.0 - m) * (1.0 + r) * wr};
    }
  }
  return {};
}

VectorField vector_field(SystemVariant variant, const ModelParams& params,
                         double K_or_CK) {
  const double q = reaction_power(params);
  switch (variant) {
    case SystemVariant::XY_plus:
    case SystemVariant::XY_minus:
      if (!(K_or_CK > 0.0))
        throw DomainError("XY charts need a shooting parameter K > 0");
      return VectorField(variant == SystemVariant::XY_plus
                             ? VectorField::Kind::XYPlus
                             : VectorField::Kind::XYMinus,
                         variant, params.N, params.m, q, K_or_CK, 0, 0, 0);
    case SystemVariant::UV:
    case SystemVariant::UV_limit: {
      if (params.regime == Regime::NoEternal)
        throw DomainError("renormalized chart requires m < m_c");
      const double C_K =
          variant == SystemVariant::UV_limit ? 0.0 : K_or_CK;
      if (!(C_K >= 0.0)) throw DomainError("C_K must be >= 0");
      // C_s at K = 1; it does not depend on K.
      const RenCoefficients ren = renormalized_coefficients(params, 1.0);
      return VectorField(VectorField::Kind::UV, variant, params.N, params.m,
                         q, 0, ren.C_m, ren.C_s, C_K);
    }
    case SystemVariant::RotatedXW:
      if (std::abs(sum_defect(params)) > kSumExactTol)
        throw DomainError("rotated chart requires m + p = 2");
      if (!(K_or_CK > 0.0))
        throw DomainError("rotated chart needs a shooting parameter K > 0");
      return VectorField(VectorField::Kind::RotatedXW, variant, params.N,
                         params.m, q, K_or_CK, 0, 0, 0);
  }
  throw DomainError("unknown system variant");
}

VectorField uv_field_raw(const ModelParams& params, double C_s, double C_K) {
  return VectorField(VectorField::Kind::UV, SystemVariant::UV, params.N,
                     params.m, reaction_power(params), 0,
                     (1.0 - params.m) / params.m, C_s, C_K);
}

VectorField yw_infinity_field(const ModelParams& params, double K) {
  if (!(sum_defect(params) < -kSumIllCondTol))
    throw DomainError("local (y,w) chart requires m + p < 2");
  const double r = (1.0 - params.m) / (2.0 - params.m - params.p);
  return VectorField(VectorField::Kind::LocalYW, SystemVariant::XY_plus,
                     params.N, params.m, r, K, 0, 0, 0);
}

std::array<EigenPair, 2> eigen_decompose(const Mat2& M) {
  const double tr = M.a11 + M.a22;
  const double det = M.a11 * M.a22 - M.a12 * M.a21;
  const double disc = tr * tr - 4.0 * det;
  std::array<std::complex<double>, 2> lambda;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    lambda[0] = (tr + s) / 2.0;
    lambda[1] = (tr - s) / 2.0;
  } else {
    const double s = std::sqrt(-disc);
    lambda[0] = {tr / 2.0, s / 2.0};
    lambda[1] = {tr / 2.0, -s / 2.0};
  }
  std::array<EigenPair, 2> out;
  for (int i = 0; i < 2; ++i) {
    const std::complex<double> l = lambda[i];
    std::array<std::complex<double>, 2> v{M.a12, l - M.a11};
    if (std::abs(v[0]) + std::abs(v[1]) < 1e-14 * (1.0 + std::abs(l))) {
      v = {l - M.a22, M.a21};
    }
    if (std::abs(v[0]) + std::abs(v[1]) < 1e-14 * (1.0 + std::abs(l))) {
      v = {i == 0 ? 1.0 : 0.0, i == 0 ? 0.0 : 1.0};  // diagonal matrix
    }
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    out[i] = EigenPair{l, {v[0] / n, v[1] / n}};
  }
  return out;
}

Stability classify_eigenvalues(const std::array<EigenPair, 2>& eigen) {
  const auto& l1 = eigen[0].value;
  const auto& l2 = eigen[1].value;
  const double scale = std::max({std::abs(l1), std::abs(l2), 1.0});
  const bool complex_pair = std::abs(l1.imag()) > 1e-14 * scale;
  if (complex_pair) {
    if (std::abs(l1.real()) < 1e-9) return Stability::center_or_focus;
    return l1.real() > 0.0 ? Stability::unstable_focus
                           : Stability::stable_focus;
  }
  const double a = l1.real(), b = l2.real();
  if (std::min(std::abs(a), std::abs(b)) < 1e-9 * scale)
    return Stability::saddle_node;
  if (a * b < 0.0) return Stability::saddle;
  return a > 0.0 ? Stability::unstable_node : Stability::stable_node;
}

Mat2 fd_jacobian(const VectorField& field, const PhasePoint& x, double step) {
  auto column = [&](int coord) {
    auto at = [&](double delta) {
      PhasePoint p = x;
      (coord == 0 ? p.u : p.v) += delta;
      return field(p);
    };
    const double h = step * std::max(1.0, std::abs(coord == 0 ? x.u : x.v));
    const PhasePoint m2 = at(-2.0 * h), m1 = at(-h), p1 = at(h),
                     p2 = at(2.0 * h);
    return PhasePoint{(m2.u - 8.0 * m1.u + 8.0 * p1.u - p2.u) / (12.0 * h),
                      (m2.v - 8.0 * m1.v + 8.0 * p1.v - p2.v) / (12.0 * h)};
  };
  const PhasePoint cx = column(0), cy = column(1);
  return {cx.u, cy.u, cx.v, cy.v};
}

CriticalPoint linearize_and_classify(CriticalPoint point,
                                     const ModelParams& params, double K) {
  if (point.chart != Chart::finite)
    throw Unsupported("linearization implemented for finite charts only");
  double third_arg = K;
  if (point.variant == SystemVariant::UV)
    third_arg = renormalized_coefficients(params, K).C_K;
  else if (point.variant == SystemVariant::UV_limit)
    third_arg = 0.0;
  const VectorField field = vector_field(point.variant, params, third_arg);
  const PhasePoint at{point.coords[0], point.coords[1]};
  const PhasePoint res = field(at);
  if (std::max(std::abs(res.u), std::abs(res.v)) > kEquilibriumResidual)
    throw NotEquilibrium("field residual " + std::to_string(std::hypot(res.u, res.v)) +
                         " at " + to_string(point.id));
  point.jacobian = field.jacobian(at);
  point.eigen = eigen_decompose(*point.jacobian);
  point.classification = classify_eigenvalues(*point.eigen);
  return point;
}

std::vector<CriticalPoint> finite_critical_points(const ModelParams& params,
                                                  double K,
                                                  SystemVariant variant) {
  const bool has_p2 = params.regime != Regime::NoEternal;
  std::vector<CriticalPoint> pts;
  auto add = [&](PointId id, double x, double y) {
    CriticalPoint p;
    p.id = id;
    p.chart = Chart::finite;
    p.variant = variant;
    p.coords = {x, y, 0.0};
    pts.push_back(linearize_and_classify(std::move(p), params, K));
  };
  switch (variant) {
    case SystemVariant::XY_plus:
    case SystemVariant::XY_minus: {
      add(PointId::P0, 0.0, 0.0);
      add(PointId::P1, 0.0, -(params.N - 2.0) / params.m);
      if (has_p2) {
        const RenCoefficients ren = renormalized_coefficients(params, K);
        add(PointId::P2, ren.X_P2, -2.0 / (1.0 - params.m));
      }
      break;
    }
    case SystemVariant::UV:
    case SystemVariant::UV_limit: {
      const RenCoefficients ren = renormalized_coefficients(params, K);
      const double root = std::sqrt(ren.C_s * ren.C_s + 4.0);
      add(PointId::P0, 0.0, (-ren.C_s + root) / 2.0);
      add(PointId::P1, 0.0, (-ren.C_s - root) / 2.0);
      add(PointId::P2, 1.0, 0.0);
      break;
    }
    case SystemVariant::RotatedXW:
      throw DomainError(
          "critical points of the rotated chart are reached through the "
          "defining change of coordinates");
  }
  return pts;
}

std::vector<CriticalPoint> infinity_critical_points(const ModelParams& params,
                                                    double K) {
  const double s = sum_defect(params);
  const double one_m = 1.0 - params.m;
  std::vector<CriticalPoint> pts;

  auto equator_point = [&](PointId id, double ex, double ey) {
    CriticalPoint p;
    p.id = id;
    p.chart = Chart::poincare_equator;
    p.variant = SystemVariant::XY_plus;
    p.coords = {ex, ey, 0.0};
    return p;
  };

  if (std::abs(s) > kSumExactTol && std::abs(s) < kSumIllCondTol)
    throw Unsupported("Q1/Q4 charts are ill-conditioned this close to m+p=2");

  if (s < -kSumExactTol) {
    // Two extra points; analyzed in the local (y,w) chart.
    const VectorField yw = yw_infinity_field(params, K);
    CriticalPoint q1 = equator_point(PointId::Q1, 1.0, 0.0);
    q1.chart = Chart::local_yw;
    q1.local_coords = {{0.0, 0.0}};
    q1.jacobian = yw.jacobian({0.0, 0.0});
    q1.eigen = eigen_decompose(*q1.jacobian);
    q1.classification = Stability::saddle_node;
    const double nrm = std::sqrt(1.0 + one_m * one_m);
    CriticalPoint q4 = equator_point(PointId::Q4, 1.0 / nrm, one_m / nrm);
    q4.chart = Chart::local_yw;
    q4.local_coords = {{one_m, 0.0}};
    q4.jacobian = yw.jacobian({one_m, 0.0});
    q4.eigen = eigen_decompose(*q4.jacobian);
    q4.classification = Stability::stable_node;
    pts.push_back(std::move(q1));
    pts.push_back(std::move(q4));
  } else if (std::abs(s) <= kSumExactTol) {
    // Slopes solve lambda^2 + (m-1) lambda + K = 0; present only while the
    // discriminant is non-negative.
    const double disc = one_m * one_m - 4.0 * K;
    if (disc >= -kSumExactTol) {
      const double root = std::sqrt(std::max(disc, 0.0));
      const double y1 = (one_m + root) / 2.0;
      const double y2 = (one_m - root) / 2.0;
      const double n1 = std::sqrt(1.0 + y1 * y1);
      const double n2 = std::sqrt(1.0 + y2 * y2);
      CriticalPoint q1 = equator_point(PointId::Q1, 1.0 / n1, y1 / n1);
      q1.classification = Stability::saddle_node;
      CriticalPoint q4 = equator_point(PointId::Q4, 1.0 / n2, y2 / n2);
      q4.classification = Stability::stable_node;
      pts.push_back(std::move(q1));
      pts.push_back(std::move(q4));
    }
  }

  CriticalPoint q2 = equator_point(PointId::Q2, 0.0, 1.0);
  q2.classification = Stability::unstable_node;
  CriticalPoint q3 = equator_point(PointId::Q3, 0.0, -1.0);
  q3.classification = Stability::stable_node;
  pts.push_back(std::move(q2));
  pts.push_back(std::move(q3));
  std::sort(pts.begin(), pts.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              return static_cast<int>(a.id) < static_cast<int>(b.id);
            });
  return pts;
}

AsymptoticDescriptor local_profile_behavior(const CriticalPoint& point,
                                            ApproachDirection direction,
                                            const ModelParams& params) {
  using Kind = AsymptoticDescriptor::Kind;
  using Limit = AsymptoticDescriptor::Limit;
  const bool out = direction == ApproachDirection::outbound;
  const double N = params.N, m = params.m, p = params.p;
  switch (point.id) {
    case PointId::P0:
      if (!out) break;
      return {Kind::regular_origin, 0.0, Limit::xi_to_0};
    case PointId::P1:
      if (out) break;
      return {Kind::tail_P1, -(N - 2.0) / m, Limit::xi_to_infinity};
    case PointId::P2:
      if (out)
        return {Kind::vertical_asymptote_origin_P2, -2.0 / (1.0 - m),
                Limit::xi_to_0};
      return {Kind::tail_P2, -2.0 / (1.0 - m), Limit::xi_to_infinity};
    case PointId::Q2:
      if (!out) break;
      return {Kind::sign_change_Q2Q3, 1.0 / m, Limit::xi_to_finite};
    case PointId::Q3:
      if (out) break;
      return {Kind::sign_change_Q2Q3, 1.0 / m, Limit::xi_to_finite};
    case PointId::Q1:
      if (out) break;
      return {Kind::asymptote_Q1Q4, 1.0 / (1.0 - p), Limit::xi_to_finite};
    case PointId::Q4:
      if (out) break;
      return {Kind::asymptote_Q1Q4, 1.0 / (m - 1.0), Limit::xi_to_finite};
  }
  throw Unsupported("no orbits meet " + to_string(point.id) +
                    (out ? " outbound" : " inbound"));
}

FlowDiagnostics flow_diagnostics(const ModelParams& params, double K) {
  if (params.regime == Regime::NoEternal)
    throw DomainError("flow diagnostics require m < m_c");
  const double q = reaction_power(params);
  const double m = params.m;
  const RenCoefficients ren = renormalized_coefficients(params, K);
  const VectorField xy = vector_field(SystemVariant::XY_plus, params, K);
  const double X2 = ren.X_P2;
  const double Y2 = -2.0 / (1.0 - m);

  FlowDiagnostics out;
  out.axis_sign = [q](double U) {
    const double v = 1.0 - pow_pos(U, q);
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  };
  // Flow across the slope-one line through P2; positive blocks
  // right-to-left crossings.
  out.line_f = [xy, X2, Y2](double X) {
    const PhasePoint vel = xy({X, X - X2 + Y2});
    return vel.u - vel.v;
  };
  out.isocline_g = [K, q, m, p = params.p](double X, double Y) {
    const double bracket = 2.0 + (1.0 - m) * Y;
    return X * bracket * bracket -
           K * (p - m) / (1.0 - m) * bracket * pow_pos(X, q);
  };
  return out;
}

}  // namespace anomalous
