// Command-line surface for the anomalous eternal-solution library: regime
// reports, critical-point classification, phase portraits, shooting,
// profile/evolution/mass exports, the closed-form solution families, the
// dimension self-map, and the oracle verification suite.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anomalous/closedform.hpp"
#include "anomalous/output.hpp"
#include "anomalous/phaseplane.hpp"
#include "anomalous/selfmap.hpp"
#include "anomalous/shooting.hpp"

namespace {

using nlohmann::ordered_json;
using namespace anomalous;

struct RunConfig {
  std::string command;
  double N = 3;
  double m = 0.1;
  double p = 2.0;
  double K = 0.0;  // 0 = unset
  std::vector<double> t_list;
  double xi_min = 0.0, xi_max = 0.0;  // 0 = native grid
  int points = 1001;
  std::string out = "-";
  std::string format;  // "", "csv", "json"
  double rel_tol = 1e-10, abs_tol = 1e-12;
  std::string which;     // explicit subfamily
  double constant = 1.0;  // free constant of the closed-form families

  IntegrationControls controls() const {
    IntegrationControls ctl;
    ctl.rel_tol = rel_tol;
    ctl.abs_tol = abs_tol;
    return ctl;
  }

  std::map<std::string, std::string> provenance() const {
    std::map<std::string, std::string> kv;
    kv["cmd"] = command;
    kv["N"] = format_g17(N);
    kv["m"] = format_g17(m);
    kv["p"] = format_g17(p);
    if (K > 0.0) kv["K"] = format_g17(K);
    if (!t_list.empty()) {
      std::string ts;
      for (double t : t_list) ts += (ts.empty() ? "" : ";") + format_g17(t);
      kv["t"] = ts;
    }
    if (xi_min > 0.0) kv["xi_min"] = format_g17(xi_min);
    if (xi_max > 0.0) kv["xi_max"] = format_g17(xi_max);
    kv["points"] = std::to_string(points);
    kv["rel_tol"] = format_g17(rel_tol);
    kv["abs_tol"] = format_g17(abs_tol);
    if (!which.empty()) kv["which"] = which;
    return kv;
  }
};

std::ostream& open_out(const RunConfig& cfg, std::ofstream& file) {
  if (cfg.out == "-" || cfg.out.empty()) return std::cout;
  file.open(cfg.out);
  if (!file) throw std::runtime_error("cannot open output file " + cfg.out);
  return file;
}

std::string fmt_or(const RunConfig& cfg, const char* dflt) {
  return cfg.format.empty() ? dflt : cfg.format;
}

void emit_json(std::ostream& os, const ordered_json& j) {
  os << j.dump(2) << '\n';
}

ordered_json params_json(const ModelParams& params) {
  ordered_json j;
  j["N"] = params.N;
  j["m"] = format_g17(params.m);
  j["p"] = format_g17(params.p);
  j["sigma"] = format_g17(params.sigma);
  j["m_c"] = format_g17(params.m_c);
  j["m_s"] = format_g17(params.m_s);
  j["regime"] = to_string(params.regime);
  return j;
}

ordered_json provenance_json(const RunConfig& cfg) {
  auto kv = cfg.provenance();
  ordered_json j;
  j["line"] = provenance_line(kv);
  j["config_hash"] = config_hash(kv);
  return j;
}

int cmd_regime(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  const FujitaGap gap = fujita_gap(params);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  if (fmt_or(cfg, "json") == "json") {
    ordered_json j;
    j["command"] = "regime";
    j["provenance"] = provenance_json(cfg);
    j["params"] = params_json(params);
    j["p_of_sigma"] = format_g17(gap.p_of_sigma);
    j["p_F_sigma"] = format_g17(gap.p_F_sigma);
    j["gap"] = format_g17(gap.gap);
    j["eternal_solutions_exist"] = params.regime != Regime::NoEternal;
    emit_json(os, j);
  } else {
    CsvWriter csv(os, cfg.provenance(),
                  {"N", "m", "p", "sigma", "m_c", "m_s", "regime",
                   "p_of_sigma", "p_F_sigma", "gap"});
    csv.row({format_g17(params.N), format_g17(params.m), format_g17(params.p),
             format_g17(params.sigma), format_g17(params.m_c),
             format_g17(params.m_s), to_string(params.regime),
             format_g17(gap.p_of_sigma), format_g17(gap.p_F_sigma),
             format_g17(gap.gap)});
  }
  return 0;
}

void classify_rows(CsvWriter& csv, const std::vector<CriticalPoint>& pts) {
  for (const auto& pt : pts) {
    std::vector<std::string> row;
    row.push_back(to_string(pt.id));
    row.push_back(to_string(pt.chart));
    row.push_back(to_string(pt.variant));
    for (double c : pt.coords) row.push_back(format_g17(c));
    if (pt.jacobian) {
      row.push_back(format_g17(pt.jacobian->a11));
      row.push_back(format_g17(pt.jacobian->a12));
      row.push_back(format_g17(pt.jacobian->a21));
      row.push_back(format_g17(pt.jacobian->a22));
    } else {
      row.insert(row.end(), 4, "");
    }
    if (pt.eigen) {
      for (const auto& e : *pt.eigen) {
        row.push_back(format_g17(e.value.real()));
        row.push_back(format_g17(e.value.imag()));
      }
    } else {
      row.insert(row.end(), 4, "");
    }
    row.push_back(pt.classification ? to_string(*pt.classification) : "");
    csv.row(row);
  }
}

int cmd_classify(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  const double K = cfg.K > 0.0 ? cfg.K : 1.0;
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  CsvWriter csv(os, cfg.provenance(),
                {"point", "chart", "variant", "x", "y", "z", "j11", "j12",
                 "j21", "j22", "eig1_re", "eig1_im", "eig2_re", "eig2_im",
                 "classification"});
  classify_rows(csv, finite_critical_points(params, K, SystemVariant::XY_plus));
  if (params.regime != Regime::NoEternal)
    classify_rows(csv, finite_critical_points(params, K, SystemVariant::UV));
  classify_rows(csv, infinity_critical_points(params, K));
  return 0;
}

void portrait_orbit(CsvWriter& csv, const std::string& name,
                    const Orbit& orbit) {
  std::size_t next_event = 0;
  for (const auto& [t, y] : orbit.samples) {
    while (next_event < orbit.events.size() &&
           orbit.events[next_event].param_value <= t) {
      const OrbitEvent& ev = orbit.events[next_event++];
      csv.row({name, format_g17(ev.param_value), format_g17(ev.state.u),
               format_g17(ev.state.v), to_string(ev.kind)});
    }
    csv.row({name, format_g17(t), format_g17(y.u), format_g17(y.v), ""});
  }
  for (; next_event < orbit.events.size(); ++next_event) {
    const OrbitEvent& ev = orbit.events[next_event];
    csv.row({name, format_g17(ev.param_value), format_g17(ev.state.u),
             format_g17(ev.state.v), to_string(ev.kind)});
  }
}

int cmd_portrait(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  if (params.regime != Regime::LowSubcritical &&
      params.regime != Regime::HighSubcritical)
    throw DomainError("portraits need the shooting regimes (m != m_s, m < m_c)");
  const double K = cfg.K > 0.0 ? cfg.K : 1.0;
  const bool mirror = params.regime == Regime::HighSubcritical;
  const IntegrationControls ctl = cfg.controls();

  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  CsvWriter csv(os, cfg.provenance(), {"orbit", "param", "U", "V", "event"});
  portrait_orbit(csv, "l0",
                 detail::launch(params, K, SeparatrixId::l0, mirror, ctl, false));
  portrait_orbit(csv, "l1",
                 detail::launch(params, K, SeparatrixId::l1, mirror, ctl, false));
  // A few context orbits launched from fixed seeds.
  const RenCoefficients ren = renormalized_coefficients(params, K);
  const double C_s = mirror ? -ren.C_s : ren.C_s;
  const VectorField field = uv_field_raw(params, C_s, ren.C_K);
  StopSet stop;
  stop.captures.push_back({PointId::P2, {1.0, 0.0}});
  int idx = 0;
  for (const PhasePoint seed :
       {PhasePoint{0.5, 0.5}, PhasePoint{1.5, 0.25}, PhasePoint{0.25, -0.5}}) {
    Orbit orb = integrate_orbit(field, seed, TimeDirection::forward, ctl, stop);
    portrait_orbit(csv, "aux" + std::to_string(idx++), orb);
  }
  return 0;
}

ordered_json shooting_json(const ShootingResult& res) {
  ordered_json j;
  j["K_star"] = format_g17(res.K_star);
  j["alpha"] = format_g17(res.exponents.alpha);
  j["beta"] = format_g17(res.exponents.beta);
  j["residual"] = format_g17(res.residual);
  j["mirrored"] = res.mirrored;
  ordered_json hist = ordered_json::array();
  for (const auto& bp : res.bracket_history) {
    ordered_json h;
    h["K"] = format_g17(bp.K);
    h["g"] = bp.g_finite ? format_g17(bp.g) : "inf";
    hist.push_back(std::move(h));
  }
  j["bracket_history"] = std::move(hist);
  return j;
}

int cmd_shoot(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  const AnomalousBranch branch =
      solve_anomalous_detailed(params, cfg.controls());
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  ordered_json j;
  j["command"] = "shoot";
  j["provenance"] = provenance_json(cfg);
  j["params"] = params_json(params);
  j["alpha"] = format_g17(branch.solution.exponents.alpha);
  j["beta"] = format_g17(branch.solution.exponents.beta);
  if (branch.shooting) {
    j["shooting"] = shooting_json(*branch.shooting);
  } else {
    j["stationary"] = true;
  }
  j["profile_tail_slope"] = format_g17(branch.solution.profile.tail.slope);
  j["ode_residual"] = format_g17(ode_residual(
      branch.solution.profile, params, branch.solution.exponents));
  emit_json(os, j);
  return 0;
}

void profile_rows(CsvWriter& csv, const Profile& prof, const RunConfig& cfg) {
  if (cfg.xi_min > 0.0 && cfg.xi_max > cfg.xi_min) {
    for (int i = 0; i < cfg.points; ++i) {
      const double x = cfg.xi_min * std::pow(cfg.xi_max / cfg.xi_min,
                                             i / (cfg.points - 1.0));
      csv.row_numeric({x, prof.value(x), prof.derivative(x)});
    }
  } else {
    for (std::size_t i = 0; i < prof.size(); ++i)
      csv.row_numeric({prof.xi[i], prof.f[i], prof.df[i]});
  }
}

int cmd_profile(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  const EternalSolution sol = solve_anomalous(params, cfg.controls());
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  CsvWriter csv(os, cfg.provenance(), {"xi", "f", "fprime"});
  profile_rows(csv, sol.profile, cfg);
  return 0;
}

int cmd_evolve(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  if (cfg.t_list.empty()) throw DomainError("evolve needs --t t1,t2,...");
  const EternalSolution sol = solve_anomalous(params, cfg.controls());
  const double r_min = cfg.xi_min > 0.0 ? cfg.xi_min : 1e-3;
  const double r_max = cfg.xi_max > r_min ? cfg.xi_max : 1e3;
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  std::vector<std::string> cols{"r"};
  for (double t : cfg.t_list) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "u_t=%.6g", t);
    cols.push_back(buf);
  }
  CsvWriter csv(os, cfg.provenance(), cols);
  for (int i = 0; i < cfg.points; ++i) {
    const double r = r_min * std::pow(r_max / r_min, i / (cfg.points - 1.0));
    std::vector<double> row{r};
    for (double t : cfg.t_list) row.push_back(evaluate_solution(sol, r, t));
    csv.row_numeric(row);
  }
  return 0;
}

int cmd_mass(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  if (cfg.t_list.empty()) throw DomainError("mass needs --t t1,t2,...");
  const EternalSolution sol = solve_anomalous(params, cfg.controls());
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  CsvWriter csv(os, cfg.provenance(), {"t", "M", "rate"});
  for (double t : cfg.t_list) {
    const MassResult mr = mass(sol, t);
    csv.row_numeric({t, mr.M, mr.rate});
  }
  return 0;
}

int cmd_explicit(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  const double xi_min = cfg.xi_min > 0.0 ? cfg.xi_min : 1e-2;
  const double xi_max = cfg.xi_max > xi_min ? cfg.xi_max : 1e2;
  auto log_grid = [&](int i) {
    return xi_min * std::pow(xi_max / xi_min, i / (cfg.points - 1.0));
  };

  if (cfg.which == "stationary") {
    const StationarySobolev u =
        stationary_sobolev(cfg.N, cfg.p, cfg.constant);
    CsvWriter csv(os, cfg.provenance(), {"r", "u", "uprime"});
    for (int i = 0; i < cfg.points; ++i) {
      const double r = log_grid(i);
      csv.row_numeric({r, u.value(r), u.derivative(r)});
    }
  } else if (cfg.which == "p2-power") {
    const P2PowerSolution f = p2_power_solution(params);
    CsvWriter csv(os, cfg.provenance(), {"xi", "f", "fprime"});
    for (int i = 0; i < cfg.points; ++i) {
      const double x = log_grid(i);
      csv.row_numeric({x, f.value(x), f.derivative(x)});
    }
  } else if (cfg.which == "sobolev-curve") {
    const auto curve = sobolev_connection_curve(params);
    CsvWriter csv(os, cfg.provenance(), {"U", "V2"});
    const double U_max = sobolev_curve_axis_intercept(params);
    for (int i = 0; i < cfg.points; ++i) {
      const double U = U_max * i / (cfg.points - 1.0);
      csv.row_numeric({U, curve(U)});
    }
  } else if (cfg.which == "connection") {
    const ExplicitConnectionConstants cc = explicit_connection_constants(cfg.N);
    const ConnectionBranch& br =
        cfg.m > cc.m2 ? cc.mirror : cc.primary;  // pick nearest branch
    const ExplicitConnectionOrbit orbit = explicit_connection_orbit(cc, br);
    CsvWriter csv(os, cfg.provenance(), {"W", "X", "flow_residual"});
    for (int i = 1; i < cfg.points; ++i) {
      const double W = orbit.W_max * i / (cfg.points - 1.0);
      csv.row_numeric({W, orbit.X_of_W(W), orbit.flow_residual(W)});
    }
  } else if (cfg.which == "p0q4" || cfg.which == "p1q4") {
    const LineFamily fam =
        cfg.which == "p0q4" ? LineFamily::P0Q4 : LineFamily::P1Q4;
    const double K_fam =
        fam == LineFamily::P0Q4
            ? 2.0 * (params.m_c - params.m) / params.N
            : 2.0 * params.N * (params.m_c - params.m) * params.m * params.m /
                  std::pow(2.0 * params.m - params.N + 2.0, 2);
    const LineFamilyProfile f = explicit_line_families(
        params, fam, cfg.constant, alpha_for_k(params, K_fam));
    const double hi = f.singular_xi > 0.0
                          ? std::min(xi_max, f.singular_xi * (1.0 - 1e-6))
                          : xi_max;
    CsvWriter csv(os, cfg.provenance(), {"xi", "f", "fprime"});
    for (int i = 0; i < cfg.points; ++i) {
      const double x = xi_min * std::pow(hi / xi_min, i / (cfg.points - 1.0));
      csv.row_numeric({x, f.value(x), f.derivative(x)});
    }
  } else {
    throw DomainError(
        "unknown explicit family '" + cfg.which +
        "' (stationary, p2-power, sobolev-curve, connection, p0q4, p1q4)");
  }
  return 0;
}

int cmd_selfmap(const RunConfig& cfg) {
  const ModelParams params = derive_params(cfg.N, cfg.m, cfg.p);
  const double K = cfg.K > 0.0 ? cfg.K : 1.0;
  const int branch = params.regime == Regime::HighSubcritical ? -1 : 1;
  const ExponentPair ep = exponents_from_k(params, K, branch);
  const SelfMapImage img = map_parameters(params, K, ep.alpha, ep.beta);
  const SelfMapImage back =
      map_parameters(img.image_params, img.K_bar, img.alpha_bar, img.beta_bar);
  const RenCoefficients ren = renormalized_coefficients(params, K);
  const RenCoefficients ren_bar =
      renormalized_coefficients(img.image_params, img.K_bar);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  ordered_json j;
  j["command"] = "selfmap";
  j["provenance"] = provenance_json(cfg);
  j["params"] = params_json(params);
  j["K"] = format_g17(K);
  j["alpha"] = format_g17(ep.alpha);
  j["beta"] = format_g17(ep.beta);
  j["image"] = params_json(img.image_params);
  j["K_bar"] = format_g17(img.K_bar);
  j["alpha_bar"] = format_g17(img.alpha_bar);
  j["beta_bar"] = format_g17(img.beta_bar);
  j["theta"] = format_g17(img.theta);
  j["f_scale"] = format_g17(img.f_scale);
  j["C_s"] = format_g17(ren.C_s);
  j["C_s_image"] = format_g17(ren_bar.C_s);
  j["C_K"] = format_g17(ren.C_K);
  j["C_K_image"] = format_g17(ren_bar.C_K);
  j["double_application_N"] = format_g17(back.N_bar);
  j["double_application_K"] = format_g17(back.K_bar);
  emit_json(os, j);
  return 0;
}

struct VerifyReport {
  std::ostream& os;
  bool all_ok = true;
  void check(const std::string& name, bool ok, const std::string& detail) {
    all_ok = all_ok && ok;
    os << (ok ? "ok   " : "FAIL ") << name;
    if (!detail.empty()) os << "  (" << detail << ")";
    os << '\n';
  }
  void check_below(const std::string& name, double value, double bound) {
    check(name, value < bound,
          "value " + format_g17(value) + " bound " + format_g17(bound));
  }
};

double profile_residual_of(const std::function<double(double)>& f,
                           const std::function<double(double)>& df,
                           double lo, double hi, const ModelParams& params,
                           const ExponentPair& ep) {
  const Profile prof = sample_profile(f, df, lo, hi, 8001, false);
  return ode_residual(prof, params, ep);
}

int cmd_verify(const RunConfig& cfg) {
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  VerifyReport rep{os};

  // Closed-form residual oracles.
  {
    const ModelParams ps = derive_params(3, 0.2, 2);
    const StationarySobolev u = stationary_sobolev(3, 2, 1.0);
    rep.check_below("stationary_sobolev_residual",
                    profile_residual_of([&](double r) { return u.value(r); },
                                        [&](double r) { return u.derivative(r); },
                                        1e-3, 1e3, ps, {0.0, 0.0}),
                    1e-8);
    const double dev = fisher_first_integral_check(
        [&](double r) { return u.value(r); }, 3, 2, 1e-2, 1e2, 8001);
    rep.check_below("fisher_first_integral", dev, 1e-8);
  }
  {
    const ModelParams params = derive_params(3, 0.1, 2);
    const P2PowerSolution f = p2_power_solution(params);
    const ExponentPair ep = exponents_from_k(params, 1.0, 1);
    rep.check_below("p2_power_residual",
                    profile_residual_of([&](double x) { return f.value(x); },
                                        [&](double x) { return f.derivative(x); },
                                        0.5, 5.0, params, ep),
                    1e-8);
  }
  {
    const ModelParams pl = derive_params(3, 0.1, 1.9);
    const double K04 = 2.0 * (pl.m_c - pl.m) / pl.N;
    const LineFamilyProfile f04 =
        explicit_line_families(pl, LineFamily::P0Q4, 1.0, alpha_for_k(pl, K04));
    const ExponentPair e04{alpha_for_k(pl, K04),
                           (pl.m - 1.0) * alpha_for_k(pl, K04) / 2.0};
    rep.check_below(
        "line_family_P0Q4_residual",
        profile_residual_of([&](double x) { return f04.value(x); },
                            [&](double x) { return f04.derivative(x); }, 1e-3,
                            f04.singular_xi * 0.85, pl, e04),
        1e-8);
    const double K14 = 2.0 * pl.N * (pl.m_c - pl.m) * pl.m * pl.m /
                       std::pow(2.0 * pl.m - pl.N + 2.0, 2);
    const LineFamilyProfile f14 =
        explicit_line_families(pl, LineFamily::P1Q4, 1.0, alpha_for_k(pl, K14));
    const ExponentPair e14{alpha_for_k(pl, K14),
                           (pl.m - 1.0) * alpha_for_k(pl, K14) / 2.0};
    rep.check_below(
        "line_family_P1Q4_residual",
        profile_residual_of([&](double x) { return f14.value(x); },
                            [&](double x) { return f14.derivative(x); }, 1e-2,
                            1e3, pl, e14),
        1e-8);
  }
  // Rotated-chart connection curve.
  {
    const ExplicitConnectionConstants cc = explicit_connection_constants(7);
    for (const auto* br : {&cc.primary, &cc.mirror}) {
      const ExplicitConnectionOrbit orbit = explicit_connection_orbit(cc, *br);
      double worst = 0.0;
      for (int i = 1; i < 100; ++i) {
        const double W = orbit.W_max * (i / 100.0 + 1e-6);
        worst = std::max(worst, std::abs(orbit.flow_residual(W)));
      }
      rep.check_below(std::string("rotated_curve_flow_residual_m") +
                          (br == &cc.primary ? "3" : "4"),
                      worst, 1e-9);
    }
  }
  // Limit-system connection against the explicit curve.
  {
    const ModelParams ps = derive_params(3, 0.2, 2);
    const auto curve = sobolev_connection_curve(ps);
    const VectorField field = uv_field_raw(ps, 0.0, 0.0);
    StopSet stop;
    stop.captures.push_back({PointId::P1, {0.0, -1.0}});
    const Orbit orb = integrate_orbit(field, {1e-6, 1.0},
                                      TimeDirection::forward, cfg.controls(),
                                      stop);
    double worst = 0.0;
    for (const auto& [t, y] : orb.samples)
      worst = std::max(worst, std::abs(y.v * y.v - curve(y.u)));
    rep.check_below("sobolev_connection_curve", worst, 1e-6);
  }
  // Shooting against the closed-form parameter value.
  {
    const ExplicitConnectionConstants cc = explicit_connection_constants(7);
    const ModelParams p3 = derive_params(7, cc.m3, 2.0 - cc.m3);
    const ShootingResult r3 = find_k_star(p3, 0.2, cfg.controls());
    rep.check_below("shooting_vs_closed_form_K_m3",
                    std::abs(r3.K_star / cc.primary.K - 1.0), 1e-4);
    const ModelParams p4 = derive_params(7, cc.m4, 2.0 - cc.m4);
    const AnomalousBranch b4 = solve_anomalous_detailed(p4, cfg.controls());
    rep.check_below("shooting_vs_closed_form_K_m4",
                    std::abs(b4.shooting->K_star / cc.mirror.K - 1.0), 1e-4);
  }
  // Self-map identities and solution transport.
  {
    const ModelParams params = derive_params(3, 0.1, 2);
    const ExponentPair ep = exponents_from_k(params, 1.0, 1);
    const SelfMapImage img = map_parameters(params, 1.0, ep.alpha, ep.beta);
    const RenCoefficients ren = renormalized_coefficients(params, 1.0);
    const RenCoefficients ren_bar =
        renormalized_coefficients(img.image_params, img.K_bar);
    rep.check_below("selfmap_Cs_flip", std::abs(ren_bar.C_s + ren.C_s), 1e-10);
    rep.check_below("selfmap_CK_invariant", std::abs(ren_bar.C_K - ren.C_K),
                    1e-10);
    const SelfMapImage back =
        map_parameters(img.image_params, img.K_bar, img.alpha_bar, img.beta_bar);
    rep.check_below("selfmap_involution", std::abs(back.N_bar - 3.0), 1e-10);
    const AnomalousBranch branch = solve_anomalous_detailed(params, cfg.controls());
    const SelfMapImage mi =
        map_parameters(params, branch.shooting->K_star,
                       branch.solution.exponents.alpha,
                       branch.solution.exponents.beta);
    const Profile mapped = map_profile(mi, branch.solution.profile);
    rep.check_below("selfmap_solution_transport",
                    ode_residual(mapped, mi.image_params,
                                 {mi.alpha_bar, mi.beta_bar}),
                    1e-4);
  }
  return rep.all_ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anomalous eternal self-similar solutions of the critically "
               "weighted fast-diffusion reaction equation"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string t_arg;
  app.add_option("--N", cfg.N, "space dimension (>= 3)");
  app.add_option("--m", cfg.m, "diffusion exponent in (0,1)");
  app.add_option("--p", cfg.p, "reaction exponent (> 1)");
  app.add_option("--K", cfg.K, "shooting parameter");
  app.add_option("--t", t_arg, "comma-separated time list");
  app.add_option("--xi-min", cfg.xi_min, "grid lower end");
  app.add_option("--xi-max", cfg.xi_max, "grid upper end");
  app.add_option("--points", cfg.points, "grid size");
  app.add_option("--out", cfg.out, "output path ('-' for stdout)");
  app.add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json", ""}));
  app.add_option("--rel-tol", cfg.rel_tol, "integrator relative tolerance");
  app.add_option("--abs-tol", cfg.abs_tol, "integrator absolute tolerance");
  app.add_option("--constant", cfg.constant,
                 "free constant of the closed-form families");
  app.set_config("--config")->envname("ANOMALOUS_SEED_CONFIG");

  app.add_subcommand("regime", "parameter report and the Fujita-type gap");
  app.add_subcommand("classify", "critical points with linear data");
  app.add_subcommand("portrait", "separatrices and context orbits at K");
  app.add_subcommand("shoot", "locate the saddle-saddle connection");
  app.add_subcommand("profile", "export the connecting profile f(xi)");
  app.add_subcommand("evolve", "u(x,t) snapshots at the given times");
  app.add_subcommand("mass", "total mass and its growth rate");
  CLI::App* exp = app.add_subcommand("explicit", "closed-form solutions");
  exp->add_option("which", cfg.which,
                  "stationary | p2-power | sobolev-curve | connection | "
                  "p0q4 | p1q4")
      ->required();
  app.add_subcommand("selfmap", "dimension-changing solution map");
  app.add_subcommand("verify", "run the oracle suite (exit 4 on failure)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (!t_arg.empty()) {
    std::stringstream ss(t_arg);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.t_list.push_back(std::stod(item));
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "regime") return cmd_regime(cfg);
    if (cfg.command == "classify") return cmd_classify(cfg);
    if (cfg.command == "portrait") return cmd_portrait(cfg);
    if (cfg.command == "shoot") return cmd_shoot(cfg);
    if (cfg.command == "profile") return cmd_profile(cfg);
    if (cfg.command == "evolve") return cmd_evolve(cfg);
    if (cfg.command == "mass") return cmd_mass(cfg);
    if (cfg.command == "explicit") return cmd_explicit(cfg);
    if (cfg.command == "selfmap") return cmd_selfmap(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    std::cerr << "unknown command\n";
    return 1;
  } catch (const DomainError& e) {
    ordered_json err{{"type", "DomainError"}, {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    ordered_json err{{"type", "SolverFailure"}, {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return 3;
  }
}
