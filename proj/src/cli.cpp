#include "heisvar/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "heisvar/errors.hpp"
#include "heisvar/exact.hpp"
#include "heisvar/fourier.hpp"

namespace heisvar::cli {

namespace {

const std::map<std::string, RouteChoice> kRouteNames{
    {"bessel", RouteChoice::bessel},         {"hyp2f2", RouteChoice::hyp2f2},
    {"quadrature", RouteChoice::quadrature}, {"spectral", RouteChoice::spectral},
    {"montecarlo", RouteChoice::montecarlo}, {"all", RouteChoice::all},
};

const std::map<std::string, WindowKind> kWindowNames{{"ball", WindowKind::ball}, {"polydisk", WindowKind::polydisk}};

const std::map<std::string, OutputFormat> kFormatNames{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};

std::string_view route_name(RouteChoice r) {
  for (const auto& [name, value] : kRouteNames)
    if (value == r) return name;
  return "?";
}

// ---------------------------------------------------------------------------
// Output

std::string format_extra(const ExtraValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(x);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          std::string s;
          for (std::size_t i = 0; i < x.size(); ++i) s += (i ? " " : "") + format_number(x[i]);
          return s;
        }
      },
      v);
}

nlohmann::ordered_json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

nlohmann::ordered_json json_extra(const ExtraValue& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return json_number(x);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          auto a = nlohmann::ordered_json::array();
          for (double e : x) a.push_back(json_number(e));
          return a;
        } else {
          return x;
        }
      },
      v);
}

class RowWriter {
 public:
  RowWriter(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

  void write(const OutputRow& row) {
    if (format_ == OutputFormat::csv) {
      header();
      std::string extra;
      for (const auto& f : row.extra) extra += (extra.empty() ? "" : ";") + f.key + "=" + format_extra(f.value);
      out_ << row.D << ',' << format_number(row.R) << ',' << format_number(row.mean) << ','
           << format_number(row.variance) << ',' << format_number(row.ratio) << ',' << row.route << ','
           << format_number(row.err_estimate) << ',' << extra << '\n';
      out_.flush();
      return;
    }
    nlohmann::ordered_json j;
    j["D"] = row.D;
    j["R"] = json_number(row.R);
    j["mean"] = json_number(row.mean);
    j["variance"] = json_number(row.variance);
    j["ratio"] = json_number(row.ratio);
    j["route"] = row.route;
    j["err_estimate"] = json_number(row.err_estimate);
    j["extra"] = nlohmann::ordered_json::object();
    for (const auto& f : row.extra) j["extra"][f.key] = json_extra(f.value);
    rows_.push_back(std::move(j));
  }

  void finish() {
    if (format_ == OutputFormat::json)
      out_ << rows_.dump(2) << '\n';
    else
      header();
  }

 private:
  void header() {
    if (!header_done_) out_ << "D,R,mean,variance,ratio,route,err_estimate,extra\n";
    header_done_ = true;
  }

  bool header_done_ = false;
  std::ostream& out_;
  OutputFormat format_;
  nlohmann::ordered_json rows_ = nlohmann::ordered_json::array();
};

// ---------------------------------------------------------------------------
// Rows

OutputRow make_row(int D, double R, const VarianceReport& v, std::string route) {
  return {D, R, v.mean, v.variance, v.ratio, std::move(route), v.err_estimate, {}};
}

OutputRow spectral_row(const RunConfig& c, double R) {
  const BernoulliSpectrum s = c.window == WindowKind::ball ? ball_spectrum(c.D, R, c.tol.spectrum)
                                                           : polydisk_spectrum(c.D, R, c.tol.spectrum);
  const SpectrumMoments m = spectrum_moments(s);
  OutputRow row{c.D, R, m.mean, m.variance, m.mean > 0 ? m.variance / m.mean : 1.0, "spectral", m.error, {}};
  row.extra.push_back({"entries", static_cast<std::uint64_t>(s.entries.size())});
  row.extra.push_back({"tail_bound", s.tail_bound});
  return row;
}

OutputRow montecarlo_row(const RunConfig& c, double R) {
  const BernoulliSpectrum s = c.window == WindowKind::ball ? ball_spectrum(c.D, R, c.tol.spectrum)
                                                           : polydisk_spectrum(c.D, R, c.tol.spectrum);
  const SampleStats st = sample_counts(s, c.n_samples, c.seed, c.threads);
  const SpectrumCumulants k = spectrum_cumulants(s);
  OutputRow row{c.D, R, st.mean, st.variance, st.mean > 0 ? st.variance / st.mean : 1.0, "montecarlo",
                st.variance_std_error, {}};
  row.extra.push_back({"seed", st.seed});
  row.extra.push_back({"n_samples", st.n_samples});
  row.extra.push_back({"skewness", st.skewness});
  row.extra.push_back({"excess_kurtosis", st.excess_kurtosis});
  row.extra.push_back({"predicted_variance", k.k2});
  row.extra.push_back({"predicted_skewness", k.skewness()});
  row.extra.push_back({"predicted_excess_kurtosis", k.excess_kurtosis()});
  row.extra.push_back({"z_variance", st.variance_std_error > 0 ? (st.variance - k.k2) / st.variance_std_error : 0.0});
  return row;
}

OutputRow route_row(const RunConfig& c, double R, RouteChoice route) {
  const HeisenbergParams p{c.D, R};
  if (c.window == WindowKind::polydisk) {
    switch (route) {
      case RouteChoice::bessel: {
        OutputRow row = make_row(c.D, R, variance_polydisk(p, c.tol.spectrum), "product");
        row.extra.push_back({"tail_bound", polydisk_sums(R, c.tol.spectrum).tail_bound});
        return row;
      }
      case RouteChoice::spectral:
        return spectral_row(c, R);
      case RouteChoice::montecarlo:
        return montecarlo_row(c, R);
      default:
        throw UsageError("route " + std::string(route_name(route)) + " is only available for ball windows");
    }
  }
  switch (route) {
    case RouteChoice::bessel:
      return make_row(c.D, R, variance_ball_bessel(p), "bessel");
    case RouteChoice::hyp2f2:
      return make_row(c.D, R, variance_ball_2f2(p, c.tol.hyp2f2), "hyp2f2");
    case RouteChoice::quadrature:
      return make_row(c.D, R,
                      variance_quadrature_fourier(heisenberg_density(c.D), heisenberg_structure_profile(), R,
                                                  c.tol.quadrature),
                      "quadrature");
    case RouteChoice::spectral:
      return spectral_row(c, R);
    case RouteChoice::montecarlo:
      return montecarlo_row(c, R);
    case RouteChoice::all:
      break;
  }
  throw UsageError("route all cannot be evaluated as a single row");
}

void emit_all_routes(const RunConfig& c, double R, RowWriter& w, std::ostream& err) {
  std::vector<RouteChoice> routes;
  if (c.window == WindowKind::ball)
    routes = {RouteChoice::bessel, RouteChoice::hyp2f2, RouteChoice::quadrature, RouteChoice::spectral};
  else
    routes = {RouteChoice::bessel, RouteChoice::spectral};
  if (c.n_samples > 0) routes.push_back(RouteChoice::montecarlo);

  std::vector<OutputRow> rows;
  for (RouteChoice r : routes) {
    try {
      rows.push_back(route_row(c, R, r));
    } catch (const GuardError& e) {
      err << "note: skipping route " << route_name(r) << " at D=" << c.D << " R=" << format_number(R) << ": "
          << e.what() << '\n';
      continue;
    }
    w.write(rows.back());
  }
  // Monte Carlo rows are statistical; they do not enter the discrepancy.
  double disc = 0.0;
  std::string used;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].route == "montecarlo") continue;
    used += (used.empty() ? "" : " ") + rows[i].route;
    for (std::size_t j = 0; j < i; ++j) {
      if (rows[j].route == "montecarlo") continue;
      disc = std::max(disc, std::abs(rows[i].variance - rows[j].variance));
    }
  }
  const OutputRow& ref = rows.front();
  OutputRow row{c.D, R, ref.mean, ref.variance, ref.ratio, "max_discrepancy", disc, {}};
  row.extra.push_back({"routes", used});
  row.extra.push_back({"relative_to_mean", ref.mean > 0 ? disc / ref.mean : disc});
  w.write(row);
}

std::vector<double> radii(const RunConfig& c) {
  if (c.range) {
    const RadiusRange& r = *c.range;
    if (r.log_spacing) return log_grid(r.r_min, r.r_max, r.n_points);
    std::vector<double> out(r.n_points);
    for (int i = 0; i < r.n_points; ++i)
      out[i] = r.n_points == 1 ? r.r_min : r.r_min + (r.r_max - r.r_min) * i / (r.n_points - 1);
    return out;
  }
  return {*c.R};
}

// ---------------------------------------------------------------------------
// Commands

void run_expand(const RunConfig& c, RowWriter& w) {
  for (double R : radii(c)) {
    const AsymptoticResult a = asymptotic_ratio({c.D, R}, c.k_max);
    const VarianceReport exact = variance_ball_bessel({c.D, R});
    OutputRow row = make_row(c.D, R, exact, "asymptotic");
    row.err_estimate = std::abs(a.value - exact.ratio) / exact.ratio;
    row.extra.push_back({"asymptotic_ratio", a.value});
    row.extra.push_back({"prefactor", a.series.prefactor});
    row.extra.push_back({"k_max", static_cast<std::uint64_t>(a.series.k_max)});
    row.extra.push_back({"coeffs", a.series.coeffs});
    row.extra.push_back({"trunc_error", a.series.trunc_error});
    w.write(row);
  }
}

void run_classify(const RunConfig& c, RowWriter& w) {
  const RadiusRange r = c.range.value_or(RadiusRange{10.0, 100.0, 20, true});
  const int d = 2 * c.D;
  HyperuniformityClass h;
  RouteChoice route = c.route;
  if (c.window == WindowKind::ball && route == RouteChoice::bessel) {
    h = classify(c.D, r.r_min, r.r_max, r.n_points);
  } else {
    RunConfig local = c;
    h = classify_function(
        d, [&](double R) { return route_row(local, R, route).variance; }, r.r_min, r.r_max, r.n_points);
  }
  OutputRow row = route_row(c, r.r_max, route);
  row.extra.push_back({"label", std::string(to_string(h.label))});
  row.extra.push_back({"fitted_exponent", h.fitted_exponent});
  row.extra.push_back({"r_min", h.r_min});
  row.extra.push_back({"r_max", h.r_max});
  row.extra.push_back({"n_points", static_cast<std::uint64_t>(r.n_points)});
  row.extra.push_back({"rss_class_i", h.rss_class_i});
  row.extra.push_back({"rss_class_ii", h.rss_class_ii});
  w.write(row);
}

struct CheckOutcome {
  bool passed = true;
  int failures = 0;
};

void verify_row(RowWriter& w, std::ostream& err, CheckOutcome& out, const std::string& check, int D, double R,
                double residual, double tol) {
  const bool ok = std::isfinite(residual) && residual <= tol;
  OutputRow row = make_row(D, R, variance_ball_bessel({D, R}), "verify");
  row.err_estimate = residual;
  row.extra.push_back({"check", check});
  row.extra.push_back({"tolerance", tol});
  row.extra.push_back({"status", std::string(ok ? "pass" : "fail")});
  w.write(row);
  if (!ok) {
    out.passed = false;
    ++out.failures;
    err << "verify: " << check << " failed at D=" << D << " R=" << format_number(R)
        << ": residual " << format_number(residual) << " > " << format_number(tol) << '\n';
  }
}

int run_verify(const RunConfig& c, RowWriter& w, std::ostream& err) {
  CheckOutcome out;

  for (int D = 1; D <= 4; ++D)
    for (double R : {0.5, 1.0, 3.0})
      verify_row(w, err, out, "recurrence", D, R, recurrence_check_An(D, R, c.tol.quadrature), 1e-8);

  // alpha_k(0) + 2 sum_{n<D} alpha_k(n) + alpha_k(D) = 2D alpha_k(D) / (2k+1), in exact integers.
  for (int D = 1; D <= 6; ++D) {
    double mismatches = 0.0;
    for (int k = 1; k <= 6; ++k) {
      const auto a0 = alpha_coeff_exact(k, 0);
      const auto aD = alpha_coeff_exact(k, 4LL * D * D);
      if (!a0 || !aD) {
        mismatches += 1.0;
        continue;
      }
      __int128 lhs = *a0 + *aD;
      for (int n = 1; n < D; ++n) lhs += 2 * *alpha_coeff_exact(k, 4LL * n * n);
      const __int128 num = 2 * static_cast<__int128>(D) * *aD;
      if (num % (2 * k + 1) != 0 || lhs != num / (2 * k + 1)) mismatches += 1.0;
    }
    verify_row(w, err, out, "beta_identity", D, 0.0, mismatches, 0.0);
  }

  for (int D = 1; D <= 5; ++D) {
    for (double R : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double mean = mean_ball({D, R});
      const double spectral = spectrum_moments(ball_spectrum(D, R, c.tol.spectrum)).mean;
      verify_row(w, err, out, "mean_identity", D, R, std::abs(spectral - mean) / mean, 1e-10);
    }
  }

  for (int D = 1; D <= 4; ++D) {
    for (double R : {0.5, 1.0, 3.0}) {
      double worst = 0.0;
      for (double kappa : {0.0, 0.1, 1.0, 2.5, 7.0, 20.0}) {
        const double chi = ball_indicator_ft(2 * D, R, kappa);
        const double iv = intersection_volume_ft(2 * D, R, kappa);
        if (chi * chi > 0) worst = std::max(worst, std::abs(iv - chi * chi) / (chi * chi));
      }
      verify_row(w, err, out, "int2", D, R, worst, 1e-12);
    }
  }

  for (int D = 1; D <= 4; ++D) {
    for (double R : {0.5, 2.0, 10.0}) {
      const DensityParams dens = heisenberg_density(D);
      const double exact = dens.rho_tilde * ball_volume(dens.d, R);
      const double v = variance_quadrature_fourier(dens, poisson_structure_profile(), R, c.tol.quadrature).variance;
      verify_row(w, err, out, "poisson_exactness", D, R, std::abs(v - exact) / exact, 1e-14);
    }
  }

  for (double R : {0.5, 1.0, 2.0, 5.0}) {
    const double ball = variance_ball_bessel({1, R}).variance;
    const double poly = variance_polydisk({1, R}, c.tol.spectrum).variance;
    verify_row(w, err, out, "polydisk_ball_d1", 1, R, std::abs(poly - ball) / ball, 1e-10);
  }

  if (!out.passed) {
    err << "verify: " << out.failures << " check(s) failed\n";
    return exit_verify;
  }
  return exit_ok;
}

double parse_env_double(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !std::isfinite(v) || v <= 0.0)
    throw UsageError(std::string(name) + ": expected a positive number, got '" + raw + "'");
  return v;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void apply_environment(Tolerances& tol) {
  tol.hyp2f2.rel_tol = parse_env_double("HEISVAR_HYP2F2_REL_TOL", tol.hyp2f2.rel_tol);
  tol.spectrum.abs_tol = parse_env_double("HEISVAR_SPECTRUM_ABS_TOL", tol.spectrum.abs_tol);
  tol.quadrature.rel_tol = parse_env_double("HEISVAR_QUAD_REL_TOL", tol.quadrature.rel_tol);
  tol.quadrature.abs_tol = parse_env_double("HEISVAR_QUAD_ABS_TOL", tol.quadrature.abs_tol);
  const double subdiv = parse_env_double("HEISVAR_QUAD_MAX_SUBDIV", tol.quadrature.max_subdivisions);
  if (subdiv != std::floor(subdiv) || subdiv > 1e8)
    throw UsageError("HEISVAR_QUAD_MAX_SUBDIV: expected a positive integer");
  tol.quadrature.max_subdivisions = static_cast<int>(subdiv);
}

void RunConfig::validate() const {
  if (D < 1 || D > 64) throw UsageError("-D must be in [1, 64]");
  if (R && !(*R > 0.0 && std::isfinite(*R))) throw UsageError("-R must be positive");
  if (range) {
    if (!(range->r_min > 0.0 && range->r_max >= range->r_min && std::isfinite(range->r_max)))
      throw UsageError("--rmin/--rmax must satisfy 0 < rmin <= rmax");
    if (range->n_points < 1) throw UsageError("-n must be at least 1");
  }
  if (k_max < 0 || k_max > 64) throw UsageError("--kmax must be in [0, 64]");

  const bool needs_radius = command == Command::mean || command == Command::variance || command == Command::ratio ||
                            command == Command::sample;
  if (needs_radius && !R && !range) throw UsageError("give -R or --rmin/--rmax");
  if (command == Command::scan && !range) throw UsageError("scan requires --rmin and --rmax");
  if (command == Command::classify) {
    if (range && (range->r_min < 1.0 || range->n_points < 5))
      throw UsageError("classify needs rmin >= 1 and at least 5 points");
    if (route == RouteChoice::all || route == RouteChoice::montecarlo || route == RouteChoice::hyp2f2)
      throw UsageError("classify supports routes bessel, quadrature and spectral");
  }
  if (command == Command::sample && n_samples < 1) throw UsageError("sample requires --samples >= 1");
  if (route == RouteChoice::montecarlo && n_samples < 1) throw UsageError("route montecarlo requires --samples >= 1");
  if (window == WindowKind::polydisk && (route == RouteChoice::hyp2f2 || route == RouteChoice::quadrature))
    throw UsageError("route " + std::string(route_name(route)) + " is only available for ball windows");
  if (window == WindowKind::polydisk && command == Command::expand)
    throw UsageError("expand is defined for ball windows");
  tol.hyp2f2.validate();
  tol.spectrum.validate();
  tol.quadrature.validate();
}

RunConfig parse_command_line(int argc, const char* const* argv) {
  RunConfig c;
  try {
    apply_environment(c.tol);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  CLI::App app{"Number statistics of Heisenberg determinantal point processes", "heisvar"};
  app.require_subcommand(1, 1);

  double R = 0.0, rmin = 0.0, rmax = 0.0;
  int n_points = 10;
  bool linear = false;

  struct Spec {
    const char* name;
    const char* help;
    Command command;
    bool radius, range, route, window, sampling, kmax;
  };
  const Spec specs[] = {
      {"mean", "Mean count E in the window", Command::mean, true, true, true, true, true, false},
      {"variance", "Number variance, by one route or all of them", Command::variance, true, true, true, true, true,
       false},
      {"ratio", "Variance to mean ratio", Command::ratio, true, true, true, true, true, false},
      {"expand", "Large-R expansion of the ratio against the exact value", Command::expand, true, true, false, false,
       false, true},
      {"classify", "Hyperuniformity class from the variance growth", Command::classify, false, true, true, true, false,
       false},
      {"sample", "Monte Carlo sampling of the count", Command::sample, true, true, false, true, true, false},
      {"scan", "Table over a grid of radii", Command::scan, false, true, true, true, true, false},
      {"verify", "Run the identity suite; exit 4 on failure", Command::verify, false, false, false, false, false,
       false},
  };

  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const Spec& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    subs.emplace_back(sub, s.command);
    sub->add_option("-D,--dim", c.D, "Complex dimension (real dimension 2D)")->capture_default_str();
    if (s.radius) sub->add_option("-R,--radius", R, "Window radius");
    if (s.range) {
      sub->add_option("--rmin", rmin, "Smallest radius of the grid");
      sub->add_option("--rmax", rmax, "Largest radius of the grid");
      sub->add_option("-n,--points", n_points, "Number of grid points")->capture_default_str();
      auto* log = sub->add_flag("--log", "Log-spaced grid (default)");
      sub->add_flag("--linear", linear, "Linearly spaced grid")->excludes(log);
    }
    if (s.route)
      sub->add_option("--route", c.route, "bessel|hyp2f2|quadrature|spectral|montecarlo|all")
          ->transform(CLI::CheckedTransformer(kRouteNames, CLI::ignore_case));
    if (s.window)
      sub->add_option("--window", c.window, "ball|polydisk")
          ->transform(CLI::CheckedTransformer(kWindowNames, CLI::ignore_case));
    if (s.sampling) {
      sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
      sub->add_option("--samples", c.n_samples, "Number of Monte Carlo samples");
      sub->add_option("--threads", c.threads, "Worker threads (0: all cores); output does not depend on it");
    }
    if (s.kmax) sub->add_option("--kmax", c.k_max, "Highest expansion order")->capture_default_str();
    sub->add_option("--format", c.output, "csv|json")->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  for (const auto& [sub, cmd] : subs)
    if (sub == chosen) c.command = cmd;

  const auto given = [chosen](const char* name) {
    const CLI::Option* o = chosen->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("-R")) c.R = R;
  const bool has_min = given("--rmin");
  const bool has_max = given("--rmax");
  if (has_min != has_max) throw UsageError("--rmin and --rmax go together");
  if (has_min) {
    if (c.R) throw UsageError("-R cannot be combined with --rmin/--rmax");
    c.range = RadiusRange{rmin, rmax, n_points, !linear};
  } else if (c.command == Command::classify && given("-n")) {
    throw UsageError("-n needs --rmin and --rmax");
  }
  if (c.command == Command::expand && !c.R && !c.range) c.R = 20.0;

  try {
    c.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RowWriter w(out, c.output);
  int status = exit_ok;
  switch (c.command) {
    case Command::mean:
    case Command::variance:
    case Command::ratio:
    case Command::scan:
      for (double R : radii(c)) {
        if (c.route == RouteChoice::all)
          emit_all_routes(c, R, w, err);
        else
          w.write(route_row(c, R, c.route));
      }
      break;
    case Command::expand:
      run_expand(c, w);
      break;
    case Command::classify:
      run_classify(c, w);
      break;
    case Command::sample:
      for (double R : radii(c)) w.write(montecarlo_row(c, R));
      break;
    case Command::verify:
      status = run_verify(c, w, err);
      break;
  }
  w.finish();
  return status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_command_line(argc, argv);
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    // --help arrives as a UsageError carrying the help text.
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "-h" || a == "--help") {
        out << msg;
        return exit_ok;
      }
    }
    err << "heisvar: " << msg << '\n';
    return exit_usage;
  }
  try {
    return run(c, out, err);
  } catch (const UsageError& e) {
    err << "heisvar: " << e.what() << '\n';
    return exit_usage;
  } catch (const DomainError& e) {
    err << "heisvar: " << e.what() << '\n';
    return exit_usage;
  } catch (const VerificationError& e) {
    err << "heisvar: verification failed: " << e.what() << '\n';
    return exit_verify;
  } catch (const std::exception& e) {
    err << "heisvar: numeric failure: " << e.what() << '\n';
    return exit_numeric;
  }
}

}  // namespace heisvar::cli
