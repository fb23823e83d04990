// Command-line front end for the operator-ordering calculus.
//
// Subcommands:
//   derive       normal-ordered squeeze coefficients from r or mu
//   verify       run the acceptance registry and report pass/fail
//   contraction  scalar connecting two ordered exponentials
//   integral     closed-form planar Gaussian integral, optional quadrature
//
// Exit codes (stable contract): 0 success / all checks pass, 1 verification
// failure, 2 usage or precondition error.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordcalc/ordcalc.hpp"

namespace {

using ordcalc::Complex;

// ---- small formatting / parsing helpers ---------------------------------

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_complex(Complex v) {
  const double im = v.imag() == 0.0 ? 0.0 : v.imag();  // normalize -0
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.9g %c %.9gi", v.real(),
                im < 0.0 ? '-' : '+', std::abs(im));
  return buf;
}

double parse_real_token(const std::string& text, const char* what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + ": cannot parse '" + text +
                                "' as a real number");
  return v;
}

/* Complex grammar: "a", "bi", "a+bi", "a-bi", with "i", "+i", "-i" meaning a
 * unit imaginary part.  Exponents are fine ("1e-2+3.5e-4i").  Whitespace is
 * ignored.
 */
Complex parse_complex(std::string text) {
  std::string s;
  for (const char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty())
    throw std::invalid_argument("complex value: empty string (expected a+bi)");

  const bool has_i = s.back() == 'i' || s.back() == 'I';
  if (!has_i) return {parse_real_token(s, "complex value"), 0.0};

  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = 1; k < body.size(); ++k) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' &&
        body[k - 1] != 'E')
      split = k;
  }
  std::string real_part = split == std::string::npos ? "" : body.substr(0, split);
  std::string imag_part = split == std::string::npos ? body : body.substr(split);
  if (imag_part.empty() || imag_part == "+") imag_part = "1";
  if (imag_part == "-") imag_part = "-1";
  const double re =
      real_part.empty() ? 0.0 : parse_real_token(real_part, "complex value");
  const double im = parse_real_token(imag_part, "complex value");
  return {re, im};
}

int parse_sign(const std::string& text) {
  if (text == "+" || text == "+1" || text == "1") return +1;
  if (text == "-" || text == "-1") return -1;
  throw std::invalid_argument("sign: expected one of +, -, +1, -1 (got '" +
                              text + "')");
}

ordcalc::OrderingKind parse_ordering(const std::string& name) {
  if (name == "pq") return ordcalc::OrderingKind::pq();
  if (name == "qp") return ordcalc::OrderingKind::qp();
  if (name == "normal") return ordcalc::OrderingKind::normal();
  if (name == "antinormal") return ordcalc::OrderingKind::antinormal();
  throw std::invalid_argument(
      "ordering: expected pq, qp, normal, or antinormal (got '" + name + "')");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream stream(text);
  while (std::getline(stream, token, ','))
    out.push_back(parse_real_token(token, "r grid"));
  if (out.empty())
    throw std::invalid_argument("r grid: expected a comma-separated list");
  return out;
}

// ---- derive --------------------------------------------------------------

int run_derive(const ordcalc::SqueezeParams& sp, const std::string& format) {
  ordcalc::NormalOrderedSqueeze c = ordcalc::normal_squeeze_coefficients(sp);
  // Normalize negative zeros (e.g. c_sq at mu = 1) for stable, tidy output.
  for (ordcalc::Complex* v : {&c.prefactor, &c.c_sq, &c.c_pq, &c.c_ad2,
                              &c.c_a2, &c.c_n}) {
    if (v->real() == 0.0) *v = ordcalc::Complex(0.0, v->imag());
    if (v->imag() == 0.0) *v = ordcalc::Complex(v->real(), 0.0);
  }
  if (format == "json") {
    const nlohmann::json out = {
        {"r", sp.r},
        {"mu", sp.mu},
        {"kappa", sp.kappa},
        {"prefactor", c.prefactor.real()},
        {"c_sq", c.c_sq.real()},
        {"c_pq_im", c.c_pq.imag()},
        {"c_ad2", c.c_ad2.real()},
        {"c_a2", c.c_a2.real()},
        {"c_n", c.c_n.real()},
    };
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "r = " << format_real(sp.r) << ", mu = " << format_real(sp.mu)
            << ", kappa = " << format_real(sp.kappa) << "\n"
            << "prefactor = " << format_real(c.prefactor.real()) << "\n"
            << "quadrature symbol: prefactor * N[ exp(c_sq (q^2 + p^2) + "
               "c_pq q p) ]\n"
            << "  c_sq = " << format_real(c.c_sq.real()) << "\n"
            << "  c_pq = " << format_real(c.c_pq.imag()) << " i\n"
            << "ladder form: prefactor * exp(c_ad2 adag^2) * "
               "(1 + c_n)^(adag a) * exp(c_a2 a^2)\n"
            << "  c_ad2 = " << format_real(c.c_ad2.real()) << "\n"
            << "  c_a2  = " << format_real(c.c_a2.real()) << "\n"
            << "  c_n   = " << format_real(c.c_n.real()) << "\n";
  return 0;
}

// ---- verify ---------------------------------------------------------------

void print_show_config(const std::string& format) {
  const auto& table = ordcalc::verification_defaults();
  const ordcalc::VerifyConfig defaults;
  if (format == "json") {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& d : table) {
      checks.push_back({{"index", d.index},
                        {"name", d.name},
                        {"identity", d.identity},
                        {"truncation", d.truncation},
                        {"trusted_block", d.trusted_block},
                        {"tolerance", d.tolerance},
                        {"sweep", d.sweep}});
    }
    const nlohmann::json out = {{"config_version", ordcalc::kConfigVersion},
                                {"r_grid", defaults.r_grid},
                                {"truncation", 80},
                                {"trusted_block", 20},
                                {"checks", checks}};
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::cout << "config version: " << ordcalc::kConfigVersion << "\n";
  std::cout << "defaults: N = 80, M = 20 (headline checks), r grid {";
  for (std::size_t i = 0; i < defaults.r_grid.size(); ++i)
    std::cout << (i ? ", " : "") << format_real(defaults.r_grid[i]);
  std::cout << "}\n";
  std::cout << "per-check defaults (0 = no matrix realization):\n";
  for (const auto& d : table) {
    std::printf("  [%2d] %-24s N=%-3zu M=%-3zu tolerance=%-8g %s\n", d.index,
                d.name, d.truncation, d.trusted_block, d.tolerance, d.sweep);
  }
  std::cout << "environment: ORDCALC_THREADS caps internal parallelism\n";
}

void print_report_text(const ordcalc::VerifyReport& report) {
  std::cout << "verification report (config version " << report.config_version
            << ")\n";
  std::cout << "r grid {";
  for (std::size_t i = 0; i < report.config.r_grid.size(); ++i)
    std::cout << (i ? ", " : "") << format_real(report.config.r_grid[i]);
  std::cout << "}";
  if (report.config.truncation)
    std::cout << "; N=" << report.config.truncation;
  if (report.config.trusted_block)
    std::cout << "; M=" << report.config.trusted_block;
  if (report.config.tolerance_override > 0.0)
    std::cout << "; tolerance override "
              << format_real(report.config.tolerance_override);
  std::cout << "\n";
  for (const auto& c : report.checks) {
    std::printf("[%2d] %s  %-24s residual=%.3e tolerance=%.3e\n", c.index,
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.residual,
                c.tolerance);
    if (!c.note.empty()) std::printf("      note: %s\n", c.note.c_str());
  }
  std::printf("summary: %zu/%zu passed (wall %.0f ms)\n", report.passed(),
              report.total(), report.wall_ms);
}

int run_verify(const ordcalc::VerifyConfig& cfg, const std::string& format,
               const std::string& out_path) {
  // Warnings (never fatal): regimes where residuals stop measuring the
  // identities themselves.
  const std::size_t headline_n = cfg.truncation ? cfg.truncation : 80;
  const std::size_t headline_m = cfg.trusted_block ? cfg.trusted_block : 20;
  if (headline_n < 2 * headline_m)
    std::cerr << "warning: N < 2M; residuals may be truncation-dominated\n";
  for (const double r : cfg.r_grid)
    if (std::abs(r) > 0.7) {
      std::cerr << "warning: |r| > 0.7 lies outside the range validated at "
                   "the default dimensions\n";
      break;
    }

  const ordcalc::VerifyReport report = ordcalc::run_verification(cfg);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out)
      throw std::invalid_argument("cannot open report file: " + out_path);
    out << report.to_json().dump(2) << "\n";
  }
  if (format == "json")
    std::cout << report.to_json().dump(2) << "\n";
  else
    print_report_text(report);
  return report.all_pass() ? 0 : 1;
}

// ---- contraction -----------------------------------------------------------

int run_contraction(const std::string& from, const std::string& to, Complex z,
                    int sign, const std::string& format) {
  const ordcalc::OrderingKind source = parse_ordering(from);
  const ordcalc::OrderingKind target = parse_ordering(to);
  const ordcalc::LinearForm x{static_cast<double>(sign) * std::conj(z),
                              ordcalc::kImag * z};
  const Complex via_tables = ordcalc::general_contraction(source, target, x);

  const bool bch_defined = from == "pq" && to == "normal";
  std::optional<ordcalc::BchFactorization> bch;
  if (bch_defined) bch = ordcalc::bch_three_step(x.alpha, x.beta);

  if (format == "json") {
    nlohmann::json out = {{"from", from},
                          {"to", to},
                          {"z_re", z.real()},
                          {"z_im", z.imag()},
                          {"sign", sign},
                          {"gwt_re", via_tables.real()},
                          {"gwt_im", via_tables.imag()},
                          {"bch_available", bch_defined}};
    if (bch) {
      out["bch_re"] = bch->total.real();
      out["bch_im"] = bch->total.imag();
      out["diff"] = std::abs(bch->total - via_tables);
      nlohmann::json steps = nlohmann::json::array();
      for (const auto& step : bch->steps)
        steps.push_back({{"label", step.label},
                         {"re", step.value.real()},
                         {"im", step.value.imag()}});
      out["steps"] = steps;
    } else {
      out["bch_re"] = nullptr;
      out["bch_im"] = nullptr;
      out["diff"] = nullptr;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::cout << "X = s conj(z) q + i z p with z = " << format_complex(z)
            << ", s = " << (sign > 0 ? "+1" : "-1") << "\n";
  std::cout << "C (moment tables) = " << format_complex(via_tables) << "\n";
  if (bch) {
    std::cout << "C (three-step)    = " << format_complex(bch->total) << "\n";
    std::cout << "|difference|      = "
              << format_real(std::abs(bch->total - via_tables)) << "\n";
    for (const auto& step : bch->steps)
      std::cout << "  " << step.label << " = " << format_complex(step.value)
                << "\n";
  } else {
    std::cout << "three-step factorization: defined for pq -> normal only\n";
  }
  return 0;
}

// ---- integral ---------------------------------------------------------------

int run_integral(const ordcalc::GaussianIntegralSpec& spec, bool oracle,
                 const std::string& format) {
  const Complex value = ordcalc::gaussian_closed_form(spec);
  std::optional<Complex> quad;
  if (oracle) quad = ordcalc::gaussian_quadrature(spec);
  const double diff = quad ? std::abs(*quad - value) : 0.0;

  if (format == "json") {
    nlohmann::json out = {
        {"zeta_re", spec.zeta.real()}, {"zeta_im", spec.zeta.imag()},
        {"f_re", spec.f.real()},       {"f_im", spec.f.imag()},
        {"g_re", spec.g.real()},       {"g_im", spec.g.imag()},
        {"xi_re", spec.xi.real()},     {"xi_im", spec.xi.imag()},
        {"eta_re", spec.eta.real()},   {"eta_im", spec.eta.imag()},
        {"value_re", value.real()},    {"value_im", value.imag()},
    };
    if (quad) {
      out["oracle_re"] = quad->real();
      out["oracle_im"] = quad->imag();
      out["diff"] = diff;
    } else {
      out["oracle_re"] = nullptr;
      out["oracle_im"] = nullptr;
      out["diff"] = nullptr;
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "closed form = " << format_complex(value) << "\n";
    if (quad) {
      std::cout << "quadrature  = " << format_complex(*quad) << "\n";
      std::cout << "|difference| = " << format_real(diff) << "\n";
    }
  }

  if (quad) {
    const double allowed = 1e-6 * std::max(1.0, std::abs(value));
    if (diff > allowed) {
      std::cerr << "verification failure: quadrature disagrees with the "
                   "closed form by "
                << format_real(diff) << " (allowed " << format_real(allowed)
                << ")\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-ordering calculus: squeeze synthesis and "
               "verification"};
  app.require_subcommand(1);

  // derive ------------------------------------------------------------------
  auto* derive = app.add_subcommand(
      "derive", "normal-ordered squeeze coefficients from r or mu");
  double derive_r = 0.0, derive_mu = 0.0;
  std::string derive_format = "text";
  auto* derive_param = derive->add_option_group("parameter");
  auto* derive_r_opt =
      derive_param->add_option("--r", derive_r, "squeeze parameter r");
  derive_param->add_option("--mu", derive_mu, "scale factor mu = exp(r)");
  derive_param->require_option(1);
  derive->add_option("--format", derive_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // verify --------------------------------------------------------------------
  auto* verify = app.add_subcommand(
      "verify", "run the acceptance registry and report pass/fail");
  std::string grid_text, verify_format = "text", out_path;
  std::size_t opt_n = 0, opt_m = 0;
  double opt_tolerance = 0.0;
  bool show_config = false;
  auto* grid_opt =
      verify->add_option("--r-grid", grid_text,
                         "comma-separated squeeze parameters (default "
                         "-0.5,-0.2,0,0.2,0.5)");
  verify->add_option("--N", opt_n, "truncation dimension for matrix checks");
  verify->add_option("--M", opt_m, "trusted block compared across routes");
  verify->add_option("--tolerance", opt_tolerance,
                     "override every per-check tolerance");
  verify->add_flag("--show-config", show_config,
                   "print the versioned defaults table and exit");
  verify->add_option("--out", out_path, "also write the JSON report here");
  verify->add_option("--format", verify_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // contraction ----------------------------------------------------------------
  auto* contraction = app.add_subcommand(
      "contraction", "scalar connecting two ordered exponentials");
  std::string from, to, z_text, sign_text = "+", contraction_format = "text";
  contraction->add_option("--from", from, "source ordering")->required();
  contraction->add_option("--to", to, "target ordering")->required();
  contraction->add_option("--z", z_text, "complex z (grammar a+bi)")
      ->required();
  contraction->add_option("--sign", sign_text, "+ or - (default +)");
  contraction->add_option("--format", contraction_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // integral ---------------------------------------------------------------------
  auto* integral = app.add_subcommand(
      "integral", "planar Gaussian integral in closed form");
  std::string zeta_text, f_text = "0", g_text = "0", xi_text = "0",
              eta_text = "0", integral_format = "text";
  bool oracle = false;
  integral->add_option("--zeta", zeta_text, "quadratic coefficient (a+bi)")
      ->required();
  integral->add_option("--f", f_text, "coefficient of z^2 (a+bi)");
  integral->add_option("--g", g_text, "coefficient of conj(z)^2 (a+bi)");
  integral->add_option("--xi", xi_text, "coefficient of z (a+bi)");
  integral->add_option("--eta", eta_text, "coefficient of conj(z) (a+bi)");
  integral->add_flag("--oracle", oracle,
                     "also evaluate by two-dimensional quadrature");
  integral->add_option("--format", integral_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*derive) {
      const ordcalc::SqueezeParams sp =
          derive_r_opt->count() ? ordcalc::SqueezeParams::from_r(derive_r)
                                : ordcalc::SqueezeParams::from_mu(derive_mu);
      return run_derive(sp, derive_format);
    }
    if (*verify) {
      if (show_config) {
        print_show_config(verify_format);
        return 0;
      }
      ordcalc::VerifyConfig cfg;
      if (grid_opt->count()) cfg.r_grid = parse_grid(grid_text);
      cfg.truncation = opt_n;
      cfg.trusted_block = opt_m;
      if (opt_tolerance < 0.0)
        throw std::invalid_argument("tolerance override must be positive");
      cfg.tolerance_override = opt_tolerance;
      return run_verify(cfg, verify_format, out_path);
    }
    if (*contraction)
      return run_contraction(from, to, parse_complex(z_text),
                             parse_sign(sign_text), contraction_format);
    if (*integral) {
      ordcalc::GaussianIntegralSpec spec;
      spec.zeta = parse_complex(zeta_text);
      spec.f = parse_complex(f_text);
      spec.g = parse_complex(g_text);
      spec.xi = parse_complex(xi_text);
      spec.eta = parse_complex(eta_text);
      return run_integral(spec, oracle, integral_format);
    }
  } catch (const ordcalc::VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
