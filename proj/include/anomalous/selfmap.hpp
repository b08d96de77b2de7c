#pragma once

#include <functional>

#include "anomalous/profiles.hpp"

namespace anomalous {

/// The dimension-changing involution identifying the two anomalous regimes:
/// with theta = N(m_c - m)/(2m),
///   N_bar   = 2(N-2-2m) / (N(m_c-m))
///   xi_bar  = xi^{-theta}
///   f_bar   = (2m/(N(m_c-m)))^{2/(p-m)} xi^{(N-2)/m} f(xi)
/// K, alpha, beta transform so the renormalized phase plane is preserved:
/// C_s flips sign (the map swaps the two sides of m_s) and C_K is invariant.
struct SelfMapImage {
  ModelParams image_params;  // (N_bar, m, p) with refreshed criticals
  double N_bar = 0.0;
  double K_bar = 0.0;
  double alpha_bar = 0.0;
  double beta_bar = 0.0;
  double theta = 0.0;        // xi-map exponent
  double tail_pow = 0.0;     // (N-2)/m of the source dimension
  double f_scale = 0.0;      // constant in front of the profile map
  std::function<double(double)> xi_map;
  std::function<std::pair<double, double>(double, double)> f_map;
};

/// Image of (N, m, p, K, alpha, beta) under the self-map. Requires
/// m < m_c(N) and K > 0. The map reverses the sign of the exponents along
/// with the regime side: pushing a solution forward keeps it a solution.
SelfMapImage map_parameters(const ModelParams& params, double K, double alpha,
                            double beta);

/// Pushes a sampled profile through the map. The grid direction reverses
/// (tail and origin swap); the result is re-sorted ascending in xi_bar.
/// A log-uniform input grid stays log-uniform.
Profile map_profile(const SelfMapImage& image, const Profile& profile);

}  // namespace anomalous
