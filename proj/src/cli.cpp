#include "probprem/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "probprem/attitude.hpp"
#include "probprem/comparative.hpp"
#include "probprem/errors.hpp"
#include "probprem/format.hpp"
#include "probprem/lottery.hpp"
#include "probprem/premium.hpp"
#include "probprem/rdu.hpp"
#include "probprem/selfcheck.hpp"
#include "probprem/sharing.hpp"

namespace probprem {

namespace {

std::string premium_json(const PremiumReport& r) {
  return JsonObject()
      .field("mu_exact", r.mu_exact)
      .field("mu_approx_eu_term", r.mu_approx_eu_term)
      .field("mu_approx_dt_term", r.mu_approx_dt_term)
      .field("mu_approx_total", r.mu_approx_total)
      .field("residual", r.residual)
      .field("iterations", r.iterations)
      .str();
}

NStateSpread read_nstate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("nstate: cannot open file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw input_error("nstate: bad JSON in " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("payoffs") || !j["payoffs"].is_array() ||
      !j.contains("eps1") || !j.contains("p0") || !j.contains("w0"))
    throw input_error(
        "nstate: expected {\"payoffs\": [...], \"eps1\": r, \"p0\": r, \"w0\": r}");
  std::vector<double> payoffs;
  for (const auto& v : j["payoffs"]) {
    if (!v.is_number()) throw input_error("nstate: payoffs must be numbers");
    payoffs.push_back(v.get<double>());
  }
  return NStateSpread(payoffs, j["eps1"].get<double>(), j["p0"].get<double>(),
                      j["w0"].get<double>());
}

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string svg_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// 800x800 viewBox; q rightward, p upward
void write_triangle_svg(std::ostream& os, double p0, const CurveTrace& trace) {
  const double size = 800.0, margin = 60.0;
  const double span = size - 2.0 * margin;
  const auto sx = [&](double q) { return margin + q * span; };
  const auto sy = [&](double p) { return size - margin - p * span; };
  const auto pt = [&](double q, double p) {
    return svg_coord(sx(q)) + "," + svg_coord(sy(p));
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\">\n";
  os << "  <polygon points=\"" << pt(0, 0) << " " << pt(1, 0) << " " << pt(0, 1)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  const double q_end = std::min({2.0 * p0, 2.0 * (1.0 - p0), 1.0});
  os << "  <polyline points=\"" << pt(0, p0) << " "
     << pt(q_end, p0 - q_end / 2.0)
     << "\" fill=\"none\" stroke=\"blue\" stroke-width=\"1\"/>\n";
  std::string pts;
  for (const TrianglePoint& tp : trace.points)
    pts += pt(tp.q, tp.p) + " ";
  os << "  <polyline points=\"" << pts
     << "\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
  os << "  <circle cx=\"" << svg_coord(sx(0)) << "\" cy=\"" << svg_coord(sy(p0))
     << "\" r=\"4\" fill=\"black\"/>\n";
  os << "</svg>\n";
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"probability premium toolkit"};
  app.require_subcommand(1);

  std::string utility = "linear", weighting = "identity";
  double w0 = 0.0, p0 = 0.5, eps1 = 0.1, eps2 = 1.0;
  double tol = 1e-13;
  const auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--utility", utility, "utility model spec")
        ->capture_default_str();
    cmd->add_option("--weighting", weighting, "weighting model spec")
        ->capture_default_str();
  };
  const auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol, "root tolerance")->capture_default_str();
  };
  SolverOptions opts;

  // premium
  auto* c_prem = app.add_subcommand("premium", "exact probability premium");
  add_model_flags(c_prem);
  add_tol(c_prem);
  c_prem->add_option("--w0", w0, "initial wealth")->capture_default_str();
  c_prem->add_option("--p0", p0, "unfavorable-state probability")
      ->capture_default_str();
  c_prem->add_option("--eps1", eps1, "shifted probability mass")
      ->capture_default_str();
  c_prem->add_option("--eps2", eps2, "payoff half-spread")->capture_default_str();
  c_prem->callback([&] {
    opts.tol = tol;
    const PremiumReport r =
        probability_premium_exact(SpreadSpec(w0, p0, eps1, eps2),
                                  parse_utility(utility),
                                  parse_weighting(weighting), opts);
    out << premium_json(r) << "\n";
  });

  // riskpremium
  auto* c_risk = app.add_subcommand("riskpremium", "exact risk premium");
  add_model_flags(c_risk);
  add_tol(c_risk);
  c_risk->add_option("--w0", w0, "initial wealth")->capture_default_str();
  c_risk->add_option("--p0", p0, "unfavorable-state probability")
      ->capture_default_str();
  c_risk->add_option("--eps1", eps1, "shifted probability mass")
      ->capture_default_str();
  c_risk->add_option("--eps2", eps2, "payoff half-spread")->capture_default_str();
  c_risk->callback([&] {
    opts.tol = tol;
    const RiskPremiumReport r =
        risk_premium_exact(SpreadSpec(w0, p0, eps1, eps2),
                           parse_utility(utility), parse_weighting(weighting),
                           opts);
    out << JsonObject()
               .field("lambda_exact", r.lambda_exact)
               .field("lambda_approx_total", r.lambda_approx_total)
               .field("residual", r.residual)
               .field("iterations", r.iterations)
               .str()
        << "\n";
  });

  // nstate
  std::string nstate_file;
  auto* c_nstate = app.add_subcommand("nstate", "n-state probability premium");
  add_model_flags(c_nstate);
  add_tol(c_nstate);
  c_nstate->add_option("--file", nstate_file, "spread spec JSON file")
      ->required();
  c_nstate->callback([&] {
    opts.tol = tol;
    const PremiumReport r =
        nstate_premium_exact(read_nstate_file(nstate_file),
                             parse_utility(utility), parse_weighting(weighting),
                             opts);
    out << premium_json(r) << "\n";
  });

  // attitude
  auto* c_att = app.add_subcommand("attitude", "order of probability attitude");
  add_model_flags(c_att);
  add_tol(c_att);
  c_att->add_option("--w0", w0, "initial wealth")->capture_default_str();
  c_att->add_option("--p0", p0, "evaluation probability")->capture_default_str();
  c_att->add_option("--eps2", eps2, "payoff half-spread")->capture_default_str();
  c_att->callback([&] {
    opts.tol = tol;
    const AttitudeClassification c =
        classify(w0, p0, eps2, parse_utility(utility),
                 parse_weighting(weighting), opts);
    JsonArray diag;
    for (const auto& [e1, mu] : c.diagnostics)
      diag.push_raw(JsonArray().push(e1).push(mu).str());
    out << JsonObject()
               .field("order", to_string(c.order))
               .field("first_coeff", c.first_coeff)
               .field("second_coeff", c.second_coeff)
               .field_raw("diagnostics", diag.str())
               .str()
        << "\n";
  });

  // kink
  double kink_p = 0.5;
  auto* c_kink = app.add_subcommand("kink", "one-sided slopes at a weighting kink");
  c_kink->add_option("--weighting", weighting, "weighting model spec")
      ->capture_default_str();
  c_kink->add_option("--p", kink_p, "evaluation probability")
      ->capture_default_str();
  c_kink->callback([&] {
    const WeightingModel h = parse_weighting(weighting);
    const auto [left, right] = h.one_sided(kink_p);
    out << JsonObject()
               .field("left", left)
               .field("right", right)
               .field("kink_slope", kink_slope(h, kink_p))
               .str()
        << "\n";
  });

  // compare
  std::string u1_spec = "crra:gamma=1", u2_spec = "crra:gamma=2";
  std::string h1_spec = "identity", h2_spec = "identity";
  double xlo = 0.5, xhi = 20.0;
  int grid_n = 257, n_specs = 500;
  unsigned seed = 0x5eed1234u;
  auto* c_cmp = app.add_subcommand("compare", "comparative risk aversion");
  c_cmp->add_option("--u1", u1_spec, "utility of DM 1")->capture_default_str();
  c_cmp->add_option("--u2", u2_spec, "utility of DM 2")->capture_default_str();
  c_cmp->add_option("--h1", h1_spec, "weighting of DM 1")->capture_default_str();
  c_cmp->add_option("--h2", h2_spec, "weighting of DM 2")->capture_default_str();
  c_cmp->add_option("--xlo", xlo, "wealth grid lower end")->capture_default_str();
  c_cmp->add_option("--xhi", xhi, "wealth grid upper end")->capture_default_str();
  c_cmp->add_option("--grid", grid_n, "grid points per axis")
      ->capture_default_str();
  c_cmp->add_option("--specs", n_specs, "random spreads to sample")
      ->capture_default_str();
  c_cmp->add_option("--seed", seed, "sampling seed")->capture_default_str();
  add_tol(c_cmp);
  c_cmp->callback([&] {
    opts.tol = tol;
    const UtilityModel u1 = parse_utility(u1_spec), u2 = parse_utility(u2_spec);
    const WeightingModel h1 = parse_weighting(h1_spec),
                         h2 = parse_weighting(h2_spec);
    const auto x_grid = linspace(xlo, xhi, grid_n);
    const auto p_grid = linspace(0.01, 0.99, grid_n);
    const auto idx = check_index_dominance(u1, u2, h1, h2, x_grid, p_grid);

    std::mt19937_64 rng(seed);
    std::vector<SpreadSpec> specs;
    int guard = 0;
    while (static_cast<int>(specs.size()) < n_specs && guard < 100 * n_specs) {
      ++guard;
      const double sw0 = xlo + (xhi - xlo) * (0.05 + 0.9 * unit(rng));
      const double sp0 = 0.05 + 0.9 * unit(rng);
      const double se1 = (0.05 + 0.95 * unit(rng)) * std::min(sp0, 1.0 - sp0);
      const double se2 =
          (0.05 + 0.9 * unit(rng)) * std::min(sw0 - xlo, xhi - sw0);
      if (!(se2 > 0.0)) continue;
      if (!u1.in_domain(sw0 - se2) || !u1.in_domain(sw0 + se2) ||
          !u2.in_domain(sw0 - se2) || !u2.in_domain(sw0 + se2))
        continue;
      specs.emplace_back(sw0, sp0, se1, se2);
    }
    const auto prem = check_premium_dominance(u1, u2, h1, h2, specs, opts);

    JsonObject witnesses;
    witnesses.field_raw("index", JsonObject()
                                     .field("utility_gap", idx.worst_gap_utility)
                                     .field("x", idx.worst_x)
                                     .field("weighting_gap", idx.worst_gap_weighting)
                                     .field("p", idx.worst_p)
                                     .str());
    JsonObject prem_w;
    prem_w.field("gap", prem.worst_gap);
    if (prem.worst_spec) {
      prem_w.field_raw("spec", JsonObject()
                                   .field("w0", prem.worst_spec->w0)
                                   .field("p0", prem.worst_spec->p0)
                                   .field("eps1", prem.worst_spec->eps1)
                                   .field("eps2", prem.worst_spec->eps2)
                                   .str());
    }
    witnesses.field_raw("premium", prem_w.str());
    if (!idx.holds) {
      const auto cex =
          find_premium_counterexample(u1, u2, h1, h2, idx, 64, seed, opts);
      if (cex) {
        witnesses.field_raw("counterexample", JsonObject()
                                                  .field("w0", cex->w0)
                                                  .field("p0", cex->p0)
                                                  .field("eps1", cex->eps1)
                                                  .field("eps2", cex->eps2)
                                                  .str());
      } else {
        witnesses.field_raw("counterexample", "null");
      }
    }
    out << JsonObject()
               .field("index_dominance", idx.holds)
               .field("premium_dominance", prem.holds)
               .field_raw("witnesses", witnesses.str())
               .str()
        << "\n";
  });

  // share
  int pool_n = 2;
  double unfair_m = 0.0, loss = 1.0;
  auto* c_share = app.add_subcommand("share", "pooled vs self-borne risk");
  add_model_flags(c_share);
  add_tol(c_share);
  c_share->add_option("--n", pool_n, "pool size")->capture_default_str();
  c_share->add_option("--m", unfair_m, "unfairness rate")->capture_default_str();
  c_share->add_option("--eps1", eps1, "own loss probability")
      ->capture_default_str();
  c_share->add_option("--loss", loss, "loss size")->capture_default_str();
  c_share->add_option("--w0", w0, "initial wealth")->capture_default_str();
  c_share->callback([&] {
    opts.tol = tol;
    const UtilityModel u = parse_utility(utility);
    const WeightingModel h = parse_weighting(weighting);
    const Lottery pool = make_b_n(pool_n, eps1, loss, w0);
    const Lottery solo = make_a_star(eps1, unfair_m, loss, w0);
    JsonObject o;
    o.field("n", pool_n)
        .field("m", unfair_m)
        .field("pool_value", evaluate(pool, u, h))
        .field("solo_value", evaluate(solo, u, h))
        .field("preference", prefers_pool(pool_n, unfair_m, eps1, loss, w0, u, h));
    try {
      o.field("critical_m", critical_m_pool(pool_n, eps1, loss, w0, u, h, opts));
    } catch (const no_bracket_error&) {
      o.field_raw("critical_m", "null");
    }
    o.field_raw("pool", pool.to_json()).field_raw("solo", solo.to_json());
    out << o.str() << "\n";
  });

  // triangle
  std::string out_path, svg_path;
  double qmax = -1.0;
  int q_points = 101;
  auto* c_tri = app.add_subcommand("triangle", "indifference curve trace");
  add_model_flags(c_tri);
  add_tol(c_tri);
  c_tri->add_option("--p0", p0, "no-sharing loss probability")
      ->capture_default_str();
  c_tri->add_option("--loss", loss, "loss size")->capture_default_str();
  c_tri->add_option("--w0", w0, "initial wealth")->capture_default_str();
  c_tri->add_option("--grid", q_points, "trace grid points")
      ->capture_default_str();
  c_tri->add_option("--qmax", qmax, "largest traced q (default min(0.5, 1-p0))");
  c_tri->add_option("--out", out_path, "write CSV here instead of stdout");
  c_tri->add_option("--svg", svg_path, "also write an SVG figure here");
  c_tri->callback([&] {
    opts.tol = tol;
    const double q_hi = qmax > 0.0 ? qmax : std::min(0.5, 1.0 - p0);
    const auto grid = linspace(0.0, q_hi, q_points);
    const CurveTrace trace =
        trace_indifference(p0, loss, w0, parse_utility(utility),
                           parse_weighting(weighting), grid, opts);
    std::ostringstream csv;
    csv << "q,p,value_residual\n";
    for (std::size_t i = 0; i < trace.points.size(); ++i)
      csv << fmt_g17(trace.points[i].q) << "," << fmt_g17(trace.points[i].p)
          << "," << fmt_g17(trace.residuals[i]) << "\n";
    for (double q : trace.skipped_q)
      err << "triangle: no bracket at q = " << fmt_g17(q) << ", point skipped\n";
    if (out_path.empty()) {
      out << csv.str();
    } else {
      std::ofstream f(out_path);
      if (!f) throw input_error("triangle: cannot write " + out_path);
      f << csv.str();
    }
    if (!svg_path.empty()) {
      std::ofstream f(svg_path);
      if (!f) throw input_error("triangle: cannot write " + svg_path);
      write_triangle_svg(f, p0, trace);
    }
  });

  // check
  auto* c_check = app.add_subcommand("check", "run the acceptance suite");
  bool check_failed = false;
  c_check->callback([&] { check_failed = !run_acceptance(out, err); });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const no_bracket_error& e) {
    err << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const input_error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return check_failed ? 1 : 0;
}

}  // namespace probprem
