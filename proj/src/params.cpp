#include "anomalous/params.hpp"

#include <cmath>

namespace anomalous {

namespace {

Regime classify_regime(double m, double m_s, double m_c) {
  if (std::abs(m - m_s) <= kSobolevBand * m_s) return Regime::Sobolev;
  if (m >= m_c) return Regime::NoEternal;
  if (m < m_s) return Regime::LowSubcritical;
  return Regime::HighSubcritical;
}

ModelParams derive_impl(double N, double m, double p) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("m must lie in (0,1)");
  if (!(p > 1.0)) throw DomainError("p must be > 1");
  ModelParams out;
  out.N = N;
  out.m = m;
  out.p = p;
  out.sigma = 2.0 * (p - 1.0) / (1.0 - m);
  out.m_c = (N - 2.0) / N;
  out.m_s = (N - 2.0) / (N + 2.0);
  out.regime = classify_regime(m, out.m_s, out.m_c);
  return out;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::LowSubcritical: return "low_subcritical";
    case Regime::Sobolev: return "sobolev";
    case Regime::HighSubcritical: return "high_subcritical";
    case Regime::NoEternal: return "no_eternal";
  }
  return "unknown";
}

ModelParams derive_params(double N, double m, double p) {
  if (!(N >= 3.0)) throw DomainError("dimension N must be >= 3");
  return derive_impl(N, m, p);
}

ModelParams derive_params_extended(double N, double m, double p) {
  if (!(N > 2.0)) throw DomainError("dimension N must be > 2");
  return derive_impl(N, m, p);
}

ExponentPair exponents_from_k(const ModelParams& params, double K, int branch) {
  if (!(K > 0.0)) throw DomainError("shooting parameter K must be > 0");
  if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
  const double m = params.m;
  const double mag =
      2.0 * m * std::pow(m * K, -(1.0 - m) / (params.p - m));
  ExponentPair out;
  out.alpha = branch * mag;
  out.beta = (m - 1.0) * out.alpha / 2.0;
  return out;
}

double k_from_alpha(const ModelParams& params, double alpha) {
  if (alpha == 0.0) throw DomainError("alpha must be nonzero");
  const double m = params.m;
  return std::pow(2.0 * m / std::abs(alpha), (params.p - m) / (1.0 - m)) / m;
}

RenCoefficients renormalized_coefficients(const ModelParams& params, double K) {
  if (params.regime == Regime::NoEternal)
    throw DomainError("renormalized system requires m < m_c");
  if (!(K > 0.0)) throw DomainError("shooting parameter K must be > 0");
  const double N = params.N, m = params.m, p = params.p;
  const double gap_c = params.m_c - m;  // > 0 here
  const double B = 2.0 * N * gap_c;
  RenCoefficients out;
  out.C_m = (1.0 - m) / m;
  out.C_s = (N + 2.0) * (params.m_s - m) / std::sqrt(m * B);
  out.C_K = std::pow(1.0 - m, 2.0 * (p - 1.0) / (p - m)) /
            (std::pow(B, (m + p - 2.0) / (2.0 * (p - m))) * std::sqrt(m) *
             std::pow(K, (1.0 - m) / (p - m)));
  out.c = std::sqrt(B / m);
  out.d = (1.0 - m) / std::sqrt(m * B);
  out.X_P2 =
      std::pow(B / (K * (1.0 - m) * (1.0 - m)), (1.0 - m) / (p - m));
  return out;
}

FujitaGap fujita_gap(const ModelParams& params) {
  FujitaGap out;
  out.p_of_sigma = 1.0 + params.sigma * (1.0 - params.m) / 2.0;
  out.p_F_sigma = params.m + (2.0 + params.sigma) / params.N;
  out.gap = (params.sigma + 2.0) * (params.m - params.m_c) / 2.0;
  return out;
}

double reaction_power(const ModelParams& params) {
  return (params.p - params.m) / (1.0 - params.m);
}

}  // namespace anomalous
