#include "anomalous/selfmap.hpp"

#include <algorithm>
#include <cmath>

namespace anomalous {

SelfMapImage map_parameters(const ModelParams& params, double K, double alpha,
                            double beta) {
  if (params.regime == Regime::NoEternal)
    throw DomainError("the self-map requires m < m_c");
  if (!(K > 0.0)) throw DomainError("K must be > 0");
  const double N = params.N, m = params.m, p = params.p;
  const double D = N * (params.m_c - m);  // (N-2) - Nm

  SelfMapImage out;
  out.N_bar = 2.0 * (N - 2.0 - 2.0 * m) / D;
  out.theta = D / (2.0 * m);
  out.tail_pow = (N - 2.0) / m;
  out.f_scale = std::pow(2.0 * m / D, 2.0 / (p - m));
  // Matching the renormalized coefficients across dimensions fixes the
  // parameter and exponent maps; the exponents change sign because the
  // image lands on the other side of its Sobolev value.
  out.K_bar = K * std::pow(2.0 * m / D, (2.0 - m - p) / (1.0 - m));
  const double factor = std::pow(2.0 * m / D, (m + p - 2.0) / (p - m));
  out.alpha_bar = -alpha * factor;
  out.beta_bar = -beta * factor;
  out.image_params = derive_params_extended(out.N_bar, m, p);
  const double theta = out.theta, f_scale = out.f_scale;
  const double tail_pow = out.tail_pow;
  out.xi_map = [theta](double xi) { return std::pow(xi, -theta); };
  out.f_map = [theta, f_scale, tail_pow](double xi, double f) {
    return std::pair{std::pow(xi, -theta),
                     f_scale * std::pow(xi, tail_pow) * f};
  };
  return out;
}

Profile map_profile(const SelfMapImage& image, const Profile& profile) {
  Profile out;
  out.normalized_f0 = false;
  const double theta = image.theta, t = image.tail_pow, c = image.f_scale;
  // Source nodes whose log-slope has converged to the tail power carry no
  // curvature information; mapped near the image origin they would feed
  // pure roundoff into defect tests. Trim that trailing stretch, keeping a
  // floor of nodes so pure power-law inputs still map to a usable grid.
  std::size_t last = profile.size();
  const std::size_t keep = std::max<std::size_t>(64, profile.size() / 4);
  while (last > keep) {
    const std::size_t k = last - 1;
    const double xi = profile.xi[k];
    if (xi <= 0.0) break;
    const double slope = xi * profile.df[k] / profile.f[k];
    if (std::abs(slope - profile.tail.slope) >
        1e-3 * std::max(1.0, std::abs(profile.tail.slope)))
      break;
    --last;
  }
  // The map reverses orientation (tail and origin swap); walk the source
  // tail-to-origin so the image grid comes out ascending. The xi = 0
  // anchor has no image.
  for (std::size_t k = last; k-- > 0;) {
    const double xi = profile.xi[k];
    if (xi <= 0.0) continue;
    const double f = profile.f[k];
    const double fp = profile.df[k];
    out.xi.push_back(std::pow(xi, -theta));
    out.f.push_back(c * std::pow(xi, t) * f);
    // f_bar' = (d f_bar / d xi) / (d xi_bar / d xi)
    //        = -(c/theta) xi^{t + theta} (t f + xi f') .
    out.df.push_back(-(c / theta) * std::pow(xi, t + theta) *
                     (t * f + xi * fp));
  }
  if (out.xi.size() >= 3) out.tail = fit_power_tail(out.xi, out.f);
  return out;
}

}  // namespace anomalous
