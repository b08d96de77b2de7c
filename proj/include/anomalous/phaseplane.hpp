#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "anomalous/params.hpp"

namespace anomalous {

/// The five planar autonomous systems the analysis moves between.
///  - XY_plus:   base system in (X,Y), ansatz with alpha > 0
///  - XY_minus:  same chart, ansatz with alpha < 0 (two terms flip sign)
///  - UV:        renormalized system, P2 pinned at (1,0)
///  - UV_limit:  renormalized system with C_K = 0 (K -> infinity)
///  - RotatedXW: (X,W) chart with W = -Y + 2X/N; requires m + p = 2
enum class SystemVariant { XY_plus, XY_minus, UV, UV_limit, RotatedXW };

std::string to_string(SystemVariant v);

/// A point of a planar chart. The first coordinate is non-negative in the
/// X/U charts (the half-plane is invariant there).
struct PhasePoint {
  double u = 0.0;
  double v = 0.0;
};

struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
};

/// Immutable field evaluator with its analytic Jacobian. Pure; safe for
/// concurrent evaluation.
class VectorField {
 public:
  PhasePoint operator()(const PhasePoint& x) const { return eval(x); }
  PhasePoint eval(const PhasePoint& x) const;
  Mat2 jacobian(const PhasePoint& x) const;
  SystemVariant variant() const { return variant_; }

  // Construction goes through the factory functions below.
  enum class Kind { XYPlus, XYMinus, UV, RotatedXW, LocalYW };
  VectorField(Kind kind, SystemVariant variant, double N, double m, double q,
              double K, double C_m, double C_s, double C_K)
      : kind_(kind), variant_(variant), N_(N), m_(m), q_(q), K_(K),
        C_m_(C_m), C_s_(C_s), C_K_(C_K) {}

 private:
  Kind kind_;
  SystemVariant variant_;
  double N_, m_, q_;       // q = (p-m)/(1-m)
  double K_;               // XY / rotated charts
  double C_m_, C_s_, C_K_; // UV charts
};

/// Field for the requested variant.
///
/// The trailing argument is the shooting parameter K for the XY and rotated
/// charts and the renormalized coefficient C_K (>= 0) for UV; it is ignored
/// for UV_limit. Throws DomainError on variant/parameter mismatch
/// (RotatedXW needs |m+p-2| <= 1e-12; UV charts need m < m_c).
VectorField vector_field(SystemVariant variant, const ModelParams& params,
                         double K_or_CK);

/// Renormalized field with explicitly supplied coefficients. The sign-flip
/// reduction for the alpha < 0 branch enters here: passing -C_s gives the
/// mirror system whose trajectories are the XY_minus ones under
/// (V, eta) -> (-V, -eta).
VectorField uv_field_raw(const ModelParams& params, double C_s, double C_K);

/// Local chart at the infinity points Q1/Q4 (valid for m + p < 2), in
/// variables y = Y/X, w = X^{-(2-m-p)/(1-m)}. Q1 sits at (0,0) and Q4 at
/// (1-m, 0).
VectorField yw_infinity_field(const ModelParams& params, double K);

enum class PointId { P0, P1, P2, Q1, Q2, Q3, Q4 };
enum class Chart { finite, poincare_equator, local_yw };
enum class Stability {
  saddle,
  unstable_node,
  stable_node,
  unstable_focus,
  stable_focus,
  center_or_focus,
  saddle_node,
};

std::string to_string(PointId id);
std::string to_string(Chart chart);
std::string to_string(Stability s);

struct EigenPair {
  std::complex<double> value;
  std::array<std::complex<double>, 2> vector;
};

/// A critical point with its linear data.
///
/// `coords` is the location: (x, y, 0) for finite points, the Poincare
/// equator triple for infinity points. `chart` names the chart the linear
/// analysis lives in; for Q1/Q4 that is the local (y,w) chart and
/// `local_coords` holds the position there. Q2/Q3 carry no Jacobian (their
/// node type follows from orbit asymptotics, not matrix data).
struct CriticalPoint {
  PointId id = PointId::P0;
  Chart chart = Chart::finite;
  SystemVariant variant = SystemVariant::XY_plus;
  std::array<double, 3> coords{0.0, 0.0, 0.0};
  std::optional<std::array<double, 2>> local_coords;
  std::optional<Mat2> jacobian;
  std::optional<std::array<EigenPair, 2>> eigen;
  std::optional<Stability> classification;
};

/// Finite critical points of the variant's chart, fully linearized and
/// classified. P2 is included only for m < m_c. Supports the XY and UV
/// variants (the rotated chart is reached through its defining change of
/// coordinates, not enumerated here).
std::vector<CriticalPoint> finite_critical_points(const ModelParams& params,
                                                  double K,
                                                  SystemVariant variant);

/// Fills jacobian, eigenpairs and classification for a finite-chart point.
/// Throws NotEquilibrium if the field residual at the point exceeds 1e-10.
CriticalPoint linearize_and_classify(CriticalPoint point,
                                     const ModelParams& params, double K);

/// Critical points on the Poincare equator. Q2/Q3 always exist; Q1/Q4
/// appear for m + p < 2, and for m + p = 2 exactly when K <= (m-1)^2/4
/// (slopes are the roots of lambda^2 + (m-1) lambda + K = 0, larger root
/// listed under Q1). Within 1e-9 of m + p = 2 but not exactly at it the
/// Q1/Q4 chart is ill-conditioned and unsupported.
std::vector<CriticalPoint> infinity_critical_points(const ModelParams& params,
                                                    double K);

enum class ApproachDirection { inbound, outbound };

/// What a profile does along orbits meeting the given critical point.
struct AsymptoticDescriptor {
  enum class Kind {
    regular_origin,               // f(0) = A > 0, f'(0) = 0
    tail_P1,                      // f ~ C xi^{-(N-2)/m}
    vertical_asymptote_origin_P2, // f ~ C xi^{-2/(1-m)} as xi -> 0
    tail_P2,                      // f ~ C xi^{-2/(1-m)} as xi -> infinity
    sign_change_Q2Q3,             // f ~ C |xi - xi0|^{1/m}
    asymptote_Q1Q4,               // f -> infinity at finite xi0
  };
  enum class Limit { xi_to_0, xi_to_infinity, xi_to_finite };
  Kind kind;
  double exponent = 0.0;
  Limit limit = Limit::xi_to_0;
};

std::string to_string(AsymptoticDescriptor::Kind k);

/// Throws Unsupported for (point, direction) pairs without orbits.
AsymptoticDescriptor local_profile_behavior(const CriticalPoint& point,
                                            ApproachDirection direction,
                                            const ModelParams& params);

/// Sign diagnostics used by the global phase-plane arguments:
///  - axis_sign(U): sign of the vertical flow on the U axis, 1 - U^q
///  - line_f(X):    flow across the line through P2 of slope 1,
///                  positive means no right-to-left crossing
///  - isocline_g(X,Y): flow across the Vdot=0 isocline of the XY system
struct FlowDiagnostics {
  std::function<double(double)> axis_sign;
  std::function<double(double)> line_f;
  std::function<double(double, double)> isocline_g;
};

FlowDiagnostics flow_diagnostics(const ModelParams& params, double K);

/// Eigen-decomposition of a 2x2 matrix (analytic; complex pairs allowed).
std::array<EigenPair, 2> eigen_decompose(const Mat2& M);

/// Classification from eigenvalues per the conventions used throughout:
/// |Re lambda| < 1e-9 with nonzero imaginary part gives center_or_focus,
/// a (near-)zero real eigenvalue gives saddle_node.
Stability classify_eigenvalues(const std::array<EigenPair, 2>& eigen);

/// Central finite-difference Jacobian of a field (5-point stencil).
Mat2 fd_jacobian(const VectorField& field, const PhasePoint& x,
                 double step = 1e-5);

}  // namespace anomalous
