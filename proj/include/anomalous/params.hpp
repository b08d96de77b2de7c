#pragma once

#include <string>

#include "anomalous/errors.hpp"

namespace anomalous {

/// Position of the diffusion exponent m relative to the critical values
/// m_s = (N-2)/(N+2) and m_c = (N-2)/N. The Sobolev band takes precedence
/// within its tolerance.
enum class Regime {
  LowSubcritical,   // 0 < m < m_s : alpha > 0, beta < 0
  Sobolev,          // |m - m_s| <= kSobolevBand * m_s : stationary branch
  HighSubcritical,  // m_s < m < m_c : alpha < 0, beta > 0
  NoEternal,        // m >= m_c : no eternal solutions
};

std::string to_string(Regime r);

/// Relative half-width of the band around m_s classified as Sobolev.
/// Shooting degenerates there (K* -> infinity), so the explicit stationary
/// branch takes over.
inline constexpr double kSobolevBand = 1e-8;

/// Model parameters of u_t = div(grad u^m) + |x|^sigma u^p with the critical
/// weight sigma = 2(p-1)/(1-m), plus derived critical exponents.
///
/// N is stored as a real number: the dimension-changing self-map produces
/// non-integer image dimensions, and every formula downstream is analytic
/// in N. User-facing entry points still require N >= 3.
struct ModelParams {
  double N = 3.0;
  double m = 0.1;
  double p = 2.0;
  double sigma = 0.0;  // 2(p-1)/(1-m)
  double m_c = 0.0;    // (N-2)/N
  double m_s = 0.0;    // (N-2)/(N+2)
  Regime regime = Regime::LowSubcritical;
};

/// Signed self-similar exponents of u = e^{alpha t} f(|x| e^{-beta t}).
/// alpha = 2 beta / (m-1) always; the sign of alpha matches the regime.
struct ExponentPair {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Coefficients of the renormalized phase-plane system in (U,V) variables,
/// together with the change-of-variable scales X = X_P2 * U,
/// Y = (c V - 2)/(1-m), eta = d * eta_bar.
struct RenCoefficients {
  double C_m = 0.0;   // (1-m)/m
  double C_s = 0.0;   // (N+2)(m_s-m)/sqrt(2mN(m_c-m)); changes sign at m_s
  double C_K = 0.0;   // > 0, strictly decreasing in K
  double c = 0.0;     // sqrt(2N(m_c-m)/m)
  double d = 0.0;     // (1-m)/sqrt(2mN(m_c-m));  c*d == C_m
  double X_P2 = 0.0;  // abscissa of P2 in the (X,Y) chart
};

struct FujitaGap {
  double p_of_sigma = 0.0;  // 1 + sigma(1-m)/2  (equals p by construction)
  double p_F_sigma = 0.0;   // m + (2+sigma)/N
  double gap = 0.0;         // p_F_sigma - p_of_sigma = (sigma+2)(m-m_c)/2
};

/// Validates (N, m, p) and fills the derived exponents and regime tag.
/// Requires N >= 3, 0 < m < 1, p > 1; throws DomainError otherwise.
ModelParams derive_params(double N, double m, double p);

/// Same as derive_params but accepts any real dimension N > 2. Used for
/// self-map images; not a user-facing entry point.
ModelParams derive_params_extended(double N, double m, double p);

/// Inverts K = (1/m) (2m/|alpha|)^{(p-m)/(1-m)}:
///   |alpha| = 2m (mK)^{-(1-m)/(p-m)},  beta = (m-1) alpha / 2.
/// branch = +1 selects alpha > 0 (low subcritical), -1 selects alpha < 0.
ExponentPair exponents_from_k(const ModelParams& params, double K, int branch);

/// K = (1/m) (2m/|alpha|)^{(p-m)/(1-m)}. Round-trips exponents_from_k.
double k_from_alpha(const ModelParams& params, double alpha);

/// Coefficients of the renormalized system for shooting parameter K > 0.
/// Throws DomainError for m >= m_c (P2 is absent there).
RenCoefficients renormalized_coefficients(const ModelParams& params, double K);

/// The gap p_{F,sigma} - p(sigma) controlling non-existence for m > m_c.
/// Computed in the factored, cancellation-free form (sigma+2)(m-m_c)/2.
FujitaGap fujita_gap(const ModelParams& params);

/// (p-m)/(1-m), the power of the first coordinate in every system variant.
/// Always > 1 for p > 1 > m.
double reaction_power(const ModelParams& params);

}  // namespace anomalous
