#include "anomalous/closedform.hpp"

#include <cmath>

#include "anomalous/phaseplane.hpp"

namespace anomalous {

namespace {

constexpr double kFamilyKTol = 1e-9;  // relative K mismatch tolerance

}  // namespace

double StationarySobolev::value(double r) const {
  const double m_s = (N - 2.0) / (N + 2.0);
  // The leading constant carries a factor 1/2: with it the residual of the
  // profile equation vanishes identically (checked symbolically), and the
  // first integral of the log-radial form is exactly zero.
  const double B = (N * N - 4.0) * (p + m_s) * D / 2.0;
  const double denom = 1.0 + D * std::pow(r, L);
  return std::pow(B / (denom * denom), 1.0 / (p - m_s));
}

double StationarySobolev::derivative(double r) const {
  if (r == 0.0) return 0.0;
  const double m_s = (N - 2.0) / (N + 2.0);
  const double denom = 1.0 + D * std::pow(r, L);
  // u'/u = -2 D L r^{L-1} / ((p - m_s)(1 + D r^L))
  return value(r) * (-2.0 * D * L * std::pow(r, L - 1.0)) /
         ((p - m_s) * denom);
}

StationarySobolev stationary_sobolev(double N, double p, double D) {
  if (!(N >= 3.0)) throw DomainError("dimension N must be >= 3");
  if (!(p > 1.0)) throw DomainError("p must be > 1");
  if (!(D > 0.0)) throw DomainError("D must be > 0");
  StationarySobolev out;
  out.N = N;
  out.p = p;
  out.D = D;
  out.L = ((N + 2.0) * p - (N - 2.0)) / 2.0;
  out.u0 = out.value(0.0);
  return out;
}

double stationary_sobolev_unit_D(double N, double p) {
  const double m_s = (N - 2.0) / (N + 2.0);
  return 2.0 / ((N * N - 4.0) * (p + m_s));
}

EternalSolution stationary_sobolev_solution(const ModelParams& params) {
  if (params.regime != Regime::Sobolev)
    throw DomainError("stationary branch requires m = m_s");
  const StationarySobolev u = stationary_sobolev(
      params.N, params.p, stationary_sobolev_unit_D(params.N, params.p));
  EternalSolution sol;
  sol.params = params;
  sol.exponents = {0.0, 0.0};
  sol.profile = sample_profile([&](double r) { return u.value(r); },
                               [&](double r) { return u.derivative(r); },
                               1e-3, 1e4, 8001, /*anchor_zero=*/true, u.u0);
  sol.profile.normalized_f0 = true;
  return sol;
}

std::function<double(double)> sobolev_connection_curve(
    const ModelParams& params) {
  if (params.regime != Regime::Sobolev)
    throw DomainError("the explicit connection curve requires m = m_s");
  const double m = params.m, p = params.p;
  const double q = reaction_power(params);
  return [m, p, q](double U) {
    return 1.0 - 2.0 * m / (m + p) * std::pow(U, q);
  };
}

double sobolev_curve_axis_intercept(const ModelParams& params) {
  const double m = params.m, p = params.p;
  return std::pow((m + p) / (2.0 * m), (1.0 - m) / (p - m));
}

double P2PowerSolution::value(double xi) const {
  return C * std::pow(xi, exponent);
}

double P2PowerSolution::derivative(double xi) const {
  return C * exponent * std::pow(xi, exponent - 1.0);
}

P2PowerSolution p2_power_solution(const ModelParams& params) {
  if (params.regime == Regime::NoEternal)
    throw DomainError("the P2 power solution requires m < m_c");
  const double m = params.m, N = params.N;
  const double om = 1.0 - m;
  P2PowerSolution out;
  out.C = std::pow(2.0 * m * N * (params.m_c - m) / (om * om),
                   1.0 / (params.p - m));
  out.exponent = -2.0 / om;
  return out;
}

double ExplicitConnectionConstants::f_of_m(double m) const {
  return (quad_a * m + quad_b) * m + quad_c;
}

ConnectionBranch connection_branch_at(double N, double m) {
  ConnectionBranch br;
  br.m = m;
  br.K = (N * (N + 8.0) * (m - 1.0) + 4.0 * (m + 1.0)) *
         (N * N * (m - 1.0) - 4.0 * (m + 1.0)) /
         (4.0 * N * N * (N + 4.0) * (N + 4.0));
  br.b = 2.0 * N * (N + 4.0) /
         (m * N * N - N * N + 8.0 * m * N - 4.0 * N + 4.0 * m + 20.0);
  const double S = br.K * N * N + 2.0 * N * (m - (N - 2.0) / N);
  const double m_c = (N - 2.0) / N;
  if (S > 0.0) {
    br.a = std::sqrt(N * N * (N + 2.0) / S);
    br.admissible = m > 0.0 && m < m_c;
  } else {
    br.a = std::numeric_limits<double>::quiet_NaN();
    br.admissible = false;
  }
  return br;
}

ExplicitConnectionConstants explicit_connection_constants(double N) {
  if (!(N >= 3.0)) throw DomainError("dimension N must be >= 3");
  ExplicitConnectionConstants out;
  out.N = N;
  out.m1 = (N - 6.0) / (N - 2.0);
  out.m2 = (N * N + 4.0 * N - 20.0) / (N * N + 8.0 * N + 4.0);
  out.quad_a = N * N + 8.0 * N + 4.0;
  out.quad_b = -(2.0 * N * N - 16.0);
  out.quad_c = (N - 2.0) * (N - 6.0);
  // Roots via the cancellation-safe quadratic variant (quad_b < 0 here);
  // quad_b^2 - 4 quad_a quad_c = 64 (2N^2 - 4N + 1).
  const double sq = 8.0 * std::sqrt(2.0 * N * N - 4.0 * N + 1.0);
  const double qs = (-out.quad_b + sq) / 2.0;
  out.m4 = qs / out.quad_a;
  out.m3 = out.quad_c / qs;
  out.primary = connection_branch_at(N, out.m3);
  out.mirror = connection_branch_at(N, out.m4);
  return out;
}

ExplicitConnectionOrbit explicit_connection_orbit(
    const ExplicitConnectionConstants& constants,
    const ConnectionBranch& branch) {
  const double N = constants.N, m = branch.m;
  const double fscale = std::abs(constants.quad_a) * m * m +
                        std::abs(constants.quad_b) * m +
                        std::abs(constants.quad_c);
  if (std::abs(constants.f_of_m(m)) > 1e-9 * fscale)
    throw ConstraintViolated("branch is not a root of the pinning quadratic");
  if (!branch.admissible)
    throw ConstraintViolated("branch constants are not admissible");

  const ModelParams params = derive_params_extended(N, m, 2.0 - m);
  const VectorField field =
      vector_field(SystemVariant::RotatedXW, params, branch.K);
  const double a = branch.a, b = branch.b;

  ExplicitConnectionOrbit out;
  out.W_max = (N - 2.0) / m;
  out.X_of_W = [a, b](double W) { return a * std::sqrt(W) + b * W; };
  out.flow_residual = [field, a, b](double W) {
    const double sw = std::sqrt(W);
    const double X = a * sw + b * W;
    const double dXdW = a / (2.0 * sw) + b;
    const PhasePoint vel = field({X, W});
    const double defect = vel.u - dXdW * vel.v;
    const double scale =
        std::abs(vel.u) + std::abs(dXdW * vel.v) + 1e-300;
    return defect / scale;
  };
  return out;
}

double alpha_for_k(const ModelParams& params, double K) {
  return exponents_from_k(params, K, +1).alpha;
}

namespace {

void require_sum_two(const ModelParams& params) {
  if (std::abs(params.m + params.p - 2.0) > 1e-12)
    throw ConstraintViolated("line families exist only for m + p = 2");
}

}  // namespace

double LineFamilyProfile::value(double xi) const {
  const double om = 1.0 - m_;
  if (family == LineFamily::P0Q4) {
    const double bracket = constant - alpha * om * xi * xi / (2.0 * m_ * N_);
    return std::pow(bracket, -1.0 / om);
  }
  const double A = om * alpha / (2.0 * (N_ - 2.0 - 2.0 * m_));
  const double gamma = N_ * ((N_ - 2.0) / N_ - m_) / m_;
  const double bracket = A + constant * std::pow(xi, gamma);
  return std::pow(xi, -2.0 / om) * std::pow(bracket, -1.0 / om);
}

double LineFamilyProfile::derivative(double xi) const {
  const double om = 1.0 - m_;
  if (family == LineFamily::P0Q4) {
    const double c2 = alpha * om / (2.0 * m_ * N_);
    const double bracket = constant - c2 * xi * xi;
    return (2.0 * c2 * xi / om) * std::pow(bracket, -1.0 / om - 1.0);
  }
  const double A = om * alpha / (2.0 * (N_ - 2.0 - 2.0 * m_));
  const double gamma = N_ * ((N_ - 2.0) / N_ - m_) / m_;
  const double g = A + constant * std::pow(xi, gamma);
  // f'/f = -2/(om xi) - gamma D xi^{gamma-1} / (om g)
  return value(xi) * (-2.0 / (om * xi) -
                      constant * gamma * std::pow(xi, gamma - 1.0) / (om * g));
}

LineFamilyProfile explicit_line_families(const ModelParams& params,
                                         LineFamily family, double constant,
                                         double alpha) {
  require_sum_two(params);
  if (params.regime == Regime::NoEternal)
    throw ConstraintViolated("line families require m < m_c");
  const double N = params.N, m = params.m;
  const double gap = params.m_c - m;
  const double K_family =
      family == LineFamily::P0Q4
          ? 2.0 * gap / N
          : 2.0 * N * gap * m * m /
                ((2.0 * m - N + 2.0) * (2.0 * m - N + 2.0));
  if (!(alpha > 0.0)) throw ConstraintViolated("alpha must be > 0");
  const double K_induced = k_from_alpha(params, alpha);
  if (std::abs(K_induced - K_family) > kFamilyKTol * K_family)
    throw ConstraintViolated(
        "alpha does not induce the family's shooting parameter");
  if (family == LineFamily::P0Q4 && !(constant > 0.0))
    throw ConstraintViolated("P0Q4 family needs C > 0");

  LineFamilyProfile out;
  out.family = family;
  out.K = K_family;
  out.alpha = alpha;
  out.constant = constant;
  out.N_ = N;
  out.m_ = m;
  if (family == LineFamily::P0Q4) {
    out.singular_xi =
        std::sqrt(2.0 * m * N * constant / (alpha * (1.0 - m)));
  } else if (constant < 0.0) {
    const double A = (1.0 - m) * alpha / (2.0 * (N - 2.0 - 2.0 * m));
    const double gamma = N * gap / m;
    out.singular_xi = std::pow(A / (-constant), 1.0 / gamma);
  }
  return out;
}

double fisher_first_integral_check(const std::function<double(double)>& u,
                                   double N, double p, double r_min,
                                   double r_max, int points) {
  const double m = (N - 2.0) / (N + 2.0);  // m_s
  const double m_c = (N - 2.0) / N;
  if (!(r_min > 0.0) || !(r_max > r_min) || points < 16)
    throw DomainError("bad sampling window");
  const double y0 = std::log(r_min), y1 = std::log(r_max);
  const double h = (y1 - y0) / (points - 1);
  std::vector<double> wm(points), wval(points);
  for (int i = 0; i < points; ++i) {
    const double y = y0 + i * h;
    const double r = std::exp(y);
    const double w = std::pow(r, 2.0 / (1.0 - m)) * u(r);
    wval[i] = w;
    wm[i] = std::pow(w, m);
  }
  const double coef2 = m * N * (m_c - m) / ((m - 1.0) * (m - 1.0));
  double worst = 0.0;
  for (int i = 2; i + 2 < points; ++i) {
    const double dwm =
        (wm[i - 2] - 8.0 * wm[i - 1] + 8.0 * wm[i + 1] - wm[i + 2]) /
        (12.0 * h);
    const double lhs = 0.5 * dwm * dwm - coef2 * wm[i] * wm[i] +
                       m / (p + m) * std::pow(wval[i], p + m);
    worst = std::max(worst, std::abs(lhs));
  }
  return worst;
}

}  // namespace anomalous
