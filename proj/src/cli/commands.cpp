#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "ddestab/cli.hpp"
#include "ddestab/eigensolver.hpp"
#include "ddestab/error.hpp"
#include "ddestab/output.hpp"
#include "ddestab/region.hpp"
#include "ddestab/simulator.hpp"

namespace ddestab::cli {

namespace {

using nlohmann::ordered_json;
using output::format_double;

constexpr int kSchemaVersion = 1;

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

std::optional<double> parse_number(const std::string& s) {
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Range parse_range(const std::string& text, const char* flag) {
  // Split on the first ':' that is not a leading sign position.
  const auto pos = text.find(':', 1);
  if (pos != std::string::npos) {
    const auto lo = parse_number(text.substr(0, pos));
    const auto hi = parse_number(text.substr(pos + 1));
    if (lo && hi && *lo < *hi) return {*lo, *hi};
  }
  throw Error(ErrorCode::InvalidArgument, std::string(flag) + " expects A:B with A < B, got '" + text + "'");
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto pos = text.find('x');
  if (pos != std::string::npos) {
    try {
      std::size_t u1 = 0, u2 = 0;
      const std::string a = text.substr(0, pos), b = text.substr(pos + 1);
      const int n_tau = std::stoi(a, &u1);
      const int n_beta = std::stoi(b, &u2);
      if (u1 == a.size() && u2 == b.size() && n_tau >= 2 && n_beta >= 2) return {n_tau, n_beta};
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::InvalidArgument, "--grid expects NxM (tau count x beta count), both >= 2, got '" + text + "'");
}

struct ParamFlags {
  RawParams raw;
  void add(CLI::App& app, bool with_beta_tau) {
    app.add_option("--alpha", raw.alpha, "activation decay rate")->required();
    if (with_beta_tau) app.add_option("--beta", raw.beta, "coupling gain")->required();
    app.add_option("--delta", raw.delta, "concentration decay rate")->required();
    app.add_option("--l", raw.l, "tube length")->required();
    app.add_option("--f", raw.f, "transport speed")->required();
    if (with_beta_tau) app.add_option("--tau", raw.tau, "delay")->required();
  }
  FixedParams fixed() const {
    // Validate through a full tuple so that the same error codes apply.
    const SystemParams p = SystemParams::validate({raw.alpha, 0.0, raw.delta, raw.l, raw.f, 0.0});
    return {p.alpha(), p.delta(), p.l(), p.f()};
  }
};

struct OutputFlags {
  std::string format = "csv";
  std::string path;
  void add(CLI::App& app, std::vector<std::string> formats) {
    app.add_option("--format", format, "output format")->check(CLI::IsMember(std::move(formats)));
    app.add_option("--output,-o", path, "output file (default stdout)");
  }
};

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot open output file '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void emit_table(std::ostream& os, const std::string& format, const std::string& command,
                const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                const std::vector<ordered_json>& json_rows) {
  if (format == "json") {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["rows"] = json_rows;
    os << doc.dump(2) << '\n';
    return;
  }
  output::write_csv_row(os, header);
  for (const auto& r : rows) output::write_csv_row(os, r);
}

ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string bound_text(const std::optional<SpectralBound>& b) {
  if (!b) return "";
  return b->below_threshold ? "<" + format_double(b->value) : format_double(b->value);
}

ordered_json bound_json(const std::optional<SpectralBound>& b) {
  if (!b) return nullptr;
  return b->value;
}

// ---------------------------------------------------------------------------

int cmd_eig(const ParamFlags& pf, double sigma, double tol, bool all_zeros, const OutputFlags& of,
            std::ostream& out) {
  const SystemParams p = SystemParams::validate(pf.raw);
  RootSet set;
  if (all_zeros) {
    set = find_roots(p, spectrum_box(p, sigma), tol);
  } else if (p.beta() == 0.0) {
    // Closed form; the search window is irrelevant.
    set.roots.push_back(Root{Complex{-p.alpha(), 0.0}, 0.0, 0, false, 1});
    set.total_count = 1;
  } else {
    set = spectrum(p, sigma);
  }
  if (!set.failures.empty()) {
    throw Error(set.failures.front().reason, "unresolved cells in the spectral search");
  }
  Sink sink(of.path, out);
  std::vector<std::vector<std::string>> rows;
  std::vector<ordered_json> jrows;
  for (const Root& r : set.roots) {
    rows.push_back({format_double(r.lambda.real()), format_double(r.lambda.imag()), format_double(r.residual),
                    r.structural ? "true" : "false", std::to_string(r.multiplicity)});
    ordered_json j;
    j["re"] = r.lambda.real();
    j["im"] = r.lambda.imag();
    j["residual"] = r.residual;
    j["structural"] = r.structural;
    j["multiplicity"] = r.multiplicity;
    jrows.push_back(std::move(j));
  }
  emit_table(sink.stream(), of.format, "eig", {"re", "im", "residual", "structural", "multiplicity"}, rows, jrows);
  return kOk;
}

int cmd_classify(const ParamFlags& pf, double eps0, const OutputFlags& of, std::ostream& out) {
  const SystemParams p = SystemParams::validate(pf.raw);
  const RegionLabel lab = classify(p, eps0);
  Sink sink(of.path, out);
  ordered_json j;
  j["label"] = to_string(lab.label);
  j["evidence"] = to_string(lab.evidence);
  j["max_real_part"] = bound_json(lab.max_real_part);
  j["below_threshold"] = lab.max_real_part && lab.max_real_part->below_threshold;
  emit_table(sink.stream(), of.format, "classify", {"label", "evidence", "max_real_part"},
             {{std::string(to_string(lab.label)), std::string(to_string(lab.evidence)), bound_text(lab.max_real_part)}},
             {j});
  return kOk;
}

double default_omega_max(double beta_max, double delta) { return eigenvalue_bound_radius(beta_max, delta) + 1.0; }

int cmd_sweep(const ParamFlags& pf, const std::string& beta_text, const std::string& tau_text,
              const std::string& grid_text, double eps0, int r0_steps, const OutputFlags& of, std::ostream& out) {
  const FixedParams fx = pf.fixed();
  const Range br = parse_range(beta_text, "--beta-range");
  const Range tr = parse_range(tau_text, "--tau-range");
  const auto [n_tau, n_beta] = parse_grid(grid_text);
  const auto nodes = sweep(fx, {br.lo, br.hi}, {tr.lo, tr.hi}, {n_beta, n_tau}, eps0);

  Sink sink(of.path, out);
  if (of.format == "svg") {
    std::vector<R0Point> r0;
    if (tr.hi > 0.0) {
      const double beta_max = std::max(std::abs(br.lo), std::abs(br.hi));
      r0 = trace_r0(fx, tr.hi, r0_steps, default_omega_max(beta_max, fx.delta)).points;
    }
    output::write_region_svg(sink.stream(), nodes, r0, {tr.lo, tr.hi}, {br.lo, br.hi});
    return kOk;
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<ordered_json> jrows;
  for (const SweepNode& n : nodes) {
    const std::string label = n.label ? std::string(to_string(n.label->label)) : "";
    const std::string evidence = n.label ? std::string(to_string(n.label->evidence)) : "";
    const std::optional<SpectralBound> bound = n.label ? n.label->max_real_part : std::nullopt;
    rows.push_back({format_double(n.tau), format_double(n.beta), label, evidence, bound_text(bound), n.error});
    ordered_json j;
    j["tau"] = n.tau;
    j["beta"] = n.beta;
    j["label"] = label;
    j["evidence"] = evidence;
    j["max_real_part"] = bound_json(bound);
    j["below_threshold"] = bound && bound->below_threshold;
    j["error"] = n.error;
    jrows.push_back(std::move(j));
  }
  emit_table(sink.stream(), of.format, "sweep", {"tau", "beta", "label", "evidence", "max_real_part", "error"},
             rows, jrows);
  return kOk;
}

int cmd_trace(const ParamFlags& pf, double tau_max, int steps, std::optional<double> omega_max, double beta_max,
              const OutputFlags& of, std::ostream& out, std::ostream& err) {
  const FixedParams fx = pf.fixed();
  const double wmax = omega_max.value_or(default_omega_max(beta_max, fx.delta));
  const R0Trace trace = trace_r0(fx, tau_max, steps, wmax);
  for (const TraceFailure& f : trace.failures) {
    err << "trace-r0: tau=" << format_double(f.tau) << ": " << f.message << '\n';
  }
  Sink sink(of.path, out);
  if (of.format == "svg") {
    output::write_trace_svg(sink.stream(), trace.points, {0.0, tau_max}, {-beta_max, beta_max});
    return kOk;
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<ordered_json> jrows;
  for (const R0Point& p : trace.points) {
    rows.push_back({format_double(p.tau), format_double(p.omega), format_double(p.beta), format_double(p.residual)});
    ordered_json j;
    j["tau"] = p.tau;
    j["omega"] = p.omega;
    j["beta"] = p.beta;
    j["residual"] = p.residual;
    jrows.push_back(std::move(j));
  }
  emit_table(sink.stream(), of.format, "trace-r0", {"tau", "omega", "beta", "residual"}, rows, jrows);
  return kOk;
}

int cmd_simulate(const ParamFlags& pf, SimConfig cfg, std::optional<double> gamma, const std::string& c0_kind,
                 double a0, const std::string& fit_text, const OutputFlags& of, std::ostream& out,
                 std::ostream& err) {
  const SystemParams p = SystemParams::validate(pf.raw);
  if (gamma) {
    cfg.gamma = *gamma;
  } else if (const auto cert = decay_certificate(p)) {
    cfg.gamma = cert->gamma;
  }
  const Simulator sim(p, cfg);
  if (sim.delay_rounding_error() > 1e-12) {
    err << "simulate: delay rounded to " << sim.delay_steps() << " steps (error "
        << format_double(sim.delay_rounding_error()) << ")\n";
  }
  InitialData init;
  const double l = p.l();
  if (c0_kind == "sine") {
    init.c0 = [l](double x) { return std::sin(std::numbers::pi * x / l); };
  } else {
    init.c0 = [](double) { return 0.0; };
  }
  init.a0 = a0;
  init.history = [](double) { return 0.0; };
  const SimResult res = sim.run(init);

  if (!fit_text.empty()) {
    const Range w = parse_range(fit_text, "--fit");
    const DecayFit fit = fit_decay_rate(res.energy, w.lo, w.hi);
    err << "simulate: fitted decay rate " << format_double(fit.rate) << " (r^2 " << format_double(fit.r_squared)
        << ")\n";
  }

  Sink sink(of.path, out);
  std::vector<std::vector<std::string>> rows;
  std::vector<ordered_json> jrows;
  for (const EnergySample& e : res.energy.samples) {
    rows.push_back({format_double(e.t), format_double(e.energy), format_double(e.a_sq), format_double(e.c_l)});
    ordered_json j;
    j["t"] = e.t;
    j["E"] = json_number(e.energy);
    j["a_sq"] = json_number(e.a_sq);
    j["c_l"] = json_number(e.c_l);
    jrows.push_back(std::move(j));
  }
  emit_table(sink.stream(), of.format, "simulate", {"t", "E", "a_sq", "c_l"}, rows, jrows);
  return kOk;
}

int cmd_certify(const ParamFlags& pf, std::optional<double> gamma, const OutputFlags& of, std::ostream& out) {
  const SystemParams p = SystemParams::validate(pf.raw);
  const auto cert = decay_certificate(p, gamma);
  Sink sink(of.path, out);
  ordered_json j;
  j["applicable"] = cert.has_value();
  if (cert) {
    j["gamma"] = cert->gamma;
    j["K"] = cert->rate;
    j["gamma_lo"] = cert->gamma_lo;
    j["gamma_hi"] = cert->gamma_hi;
  }
  if (of.format == "json") {
    emit_table(sink.stream(), "json", "certify", {}, {}, {j});
  } else if (cert) {
    emit_table(sink.stream(), "csv", "certify", {"status", "gamma", "K", "gamma_lo", "gamma_hi"},
               {{"Applicable", format_double(cert->gamma), format_double(cert->rate), format_double(cert->gamma_lo),
                 format_double(cert->gamma_hi)}},
               {});
  } else {
    emit_table(sink.stream(), "csv", "certify", {"status", "gamma", "K", "gamma_lo", "gamma_hi"},
               {{"NotApplicable", "", "", "", ""}}, {});
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral stability analysis of a transport equation coupled to a delayed activation ODE",
               "ddestab"};
  app.require_subcommand(1);

  ParamFlags eig_p, cls_p, sw_p, tr_p, sim_p, cert_p;
  OutputFlags eig_o, cls_o, sw_o, tr_o, sim_o, cert_o;

  auto* eig = app.add_subcommand("eig", "eigenvalues with Re >= -sigma");
  eig_p.add(*eig, true);
  double sigma = 1e-6, tol = 1e-12;
  bool all_zeros = false;
  eig->add_option("--sigma", sigma, "search down to Re = -sigma");
  eig->add_option("--tol", tol, "Newton step tolerance");
  eig->add_flag("--all-zeros", all_zeros, "list every zero of H in the box, structural ones included");
  eig_o.add(*eig, {"csv", "json"});

  auto* cls = app.add_subcommand("classify", "stable / oscillating / boundary label of one point");
  cls_p.add(*cls, true);
  double cls_eps0 = 1e-8;
  cls->add_option("--eps0", cls_eps0, "half-width of the boundary band");
  cls_o.add(*cls, {"csv", "json"});

  auto* sw = app.add_subcommand("sweep", "classify a (tau, beta) grid");
  sw_p.add(*sw, false);
  std::string beta_range = "-5:5", tau_range = "0:10", grid = "50x50";
  double sw_eps0 = 1e-8;
  int r0_steps = 500;
  sw->add_option("--beta-range", beta_range, "A:B");
  sw->add_option("--tau-range", tau_range, "A:B");
  sw->add_option("--grid", grid, "NxM: tau count x beta count");
  sw->add_option("--eps0", sw_eps0, "half-width of the boundary band");
  sw->add_option("--r0-steps", r0_steps, "delay grid size for the crossing overlay (svg)");
  sw_o.add(*sw, {"csv", "json", "svg"});

  auto* tr = app.add_subcommand("trace-r0", "imaginary-axis crossing points on a delay grid");
  tr_p.add(*tr, false);
  double tau_max = 10.0, beta_max = 5.0;
  int steps = 500;
  std::optional<double> omega_max;
  tr->add_option("--tau-max", tau_max, "largest delay");
  tr->add_option("--steps", steps, "number of delays, including 0 and tau-max");
  tr->add_option("--omega-max", omega_max, "frequency scan limit (default: eigenvalue bound for --beta-max, plus 1)");
  tr->add_option("--beta-max", beta_max, "gain magnitude of interest (default omega-max and svg range)");
  tr_o.add(*tr, {"csv", "json", "svg"});

  auto* sim = app.add_subcommand("simulate", "time integration and energy trace");
  sim_p.add(*sim, true);
  SimConfig cfg;
  std::optional<double> sim_gamma;
  std::string c0_kind = "sine", fit;
  double a0 = 1.0;
  sim->add_option("--nx", cfg.nx, "spatial cells");
  sim->add_option("--t-final", cfg.t_final, "end time");
  sim->add_option("--gamma", sim_gamma, "energy weight (default: certificate weight, else 1)");
  sim->add_option("--stride", cfg.output_stride, "record every n-th step");
  sim->add_option("--c0", c0_kind, "initial profile")->check(CLI::IsMember({"zero", "sine"}));
  sim->add_option("--a0", a0, "initial activation");
  sim->add_option("--fit", fit, "A:B fit window; prints the decay rate to stderr");
  sim_o.add(*sim, {"csv", "json"});

  auto* cert = app.add_subcommand("certify", "energy decay certificate");
  cert_p.add(*cert, true);
  std::optional<double> cert_gamma;
  cert->add_option("--gamma", cert_gamma, "energy weight (default: f exp(-tau))");
  cert_o.add(*cert, {"csv", "json"});

  std::vector<std::string> argv_store{"ddestab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kUsage;
  }

  try {
    if (eig->parsed()) return cmd_eig(eig_p, sigma, tol, all_zeros, eig_o, out);
    if (cls->parsed()) return cmd_classify(cls_p, cls_eps0, cls_o, out);
    if (sw->parsed()) return cmd_sweep(sw_p, beta_range, tau_range, grid, sw_eps0, r0_steps, sw_o, out);
    if (tr->parsed()) return cmd_trace(tr_p, tau_max, steps, omega_max, beta_max, tr_o, out, err);
    if (sim->parsed()) return cmd_simulate(sim_p, cfg, sim_gamma, c0_kind, a0, fit, sim_o, out, err);
    if (cert->parsed()) return cmd_certify(cert_p, cert_gamma, cert_o, out);
  } catch (const Error& e) {
    err << "ddestab: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kUsage : kNumerical;
  }
  return kUsage;
}

}  // namespace ddestab::cli
