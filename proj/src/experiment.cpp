#include "fockbridge/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>

#include <json.hpp>

#include "fockbridge/extended.hpp"
#include "fockbridge/numeric.hpp"
#include "fockbridge/symbolic.hpp"

namespace fockbridge {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& name, const std::string& what) {
  throw ConfigError(name + ": " + what);
}

// nlohmann reports byte offsets; configs are edited as lines.
std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " +
         std::to_string(column);
}

std::vector<double> double_list(const json& v) {
  std::vector<double> out;
  for (const auto& x : v)
    out.push_back(x.get<double>());
  return out;
}

DistributionSpec parse_distribution(const json& d, const std::string& name,
                                    int modes, std::uint64_t default_seed,
                                    int* count) {
  DistributionSpec spec;
  if (!d.contains("kind"))
    fail(name, "distribution needs a kind");
  const std::string kind = d.at("kind").get<std::string>();
  const std::size_t width = 2 * static_cast<std::size_t>(modes);

  const auto coords = [&](const char* field) {
    if (!d.contains(field))
      fail(name, std::string("distribution needs ") + field);
    std::vector<double> v = double_list(d.at(field));
    if (v.size() != width)
      fail(name, std::string("distribution ") + field + " must have " +
                     std::to_string(width) + " entries (phi then pi)");
    return v;
  };

  if (kind == "delta-at-state") {
    spec.kind = DistributionSpec::Kind::delta_at_state;
    spec.mean = coords("mean");
  } else if (kind == "product-gaussian") {
    spec.kind = DistributionSpec::Kind::product_gaussian;
    spec.mean = coords("mean");
    spec.stddev = coords("stddev");
  } else if (kind == "uniform-box") {
    spec.kind = DistributionSpec::Kind::uniform_box;
    spec.lo = coords("lo");
    spec.hi = coords("hi");
  } else {
    fail(name, "unknown distribution kind '" + kind + "'");
  }
  spec.seed = d.value("seed", default_seed);
  *count = d.value("count", 1);
  if (*count < 1)
    fail(name, "distribution count must be positive");
  return spec;
}

// Largest per-mode coherent amplitude the distribution can reach; gaussian
// tails are capped at six standard deviations, which the sampler will not
// exceed for any practical count.
double distribution_amplitude(const DistributionSpec& d, int modes) {
  const std::size_t n = static_cast<std::size_t>(modes);
  double amp = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double phi = 0.0, pi = 0.0;
    switch (d.kind) {
    case DistributionSpec::Kind::delta_at_state:
      phi = std::abs(d.mean[j]);
      pi = std::abs(d.mean[n + j]);
      break;
    case DistributionSpec::Kind::product_gaussian:
      phi = std::abs(d.mean[j]) + 6.0 * d.stddev[j];
      pi = std::abs(d.mean[n + j]) + 6.0 * d.stddev[n + j];
      break;
    case DistributionSpec::Kind::uniform_box:
      phi = std::max(std::abs(d.lo[j]), std::abs(d.hi[j]));
      pi = std::max(std::abs(d.lo[n + j]), std::abs(d.hi[n + j]));
      break;
    }
    amp = std::max(amp, std::sqrt((phi * phi + pi * pi) / 2.0));
  }
  return amp;
}

PhiPiPolynomial parse_polynomial(const std::string& text,
                                 const std::string& name, const char* field,
                                 int modes) {
  try {
    return parse_phipi(text, modes);
  } catch (const ParseError& err) {
    fail(name, std::string(field) + ": " + err.what());
  }
}

FockBasis resolve_basis(const ExperimentConfig& c, int min_cutoff) {
  int cutoff = c.cutoff;
  if (cutoff == 0) {
    double amp = c.max_amplitude;
    if (amp == 0.0 && c.has_distribution)
      amp = distribution_amplitude(c.distribution, c.modes);
    cutoff = cutoff_estimate(amp, c.cutoff_tolerance);
  }
  cutoff = std::max(cutoff, min_cutoff);
  return FockBasis(c.modes, cutoff);
}

Ensemble make_ensemble(const ExperimentConfig& c) {
  if (!c.has_distribution)
    throw ConfigError(c.name + ": " + c.kind + " needs a distribution");
  return sample_ensemble(c.distribution, c.sample_count);
}

CheckResult from_report(const EquivalenceReport& r) {
  CheckResult out;
  out.check = r.experiment;
  out.lhs = r.lhs;
  out.rhs = r.rhs;
  out.abs_gap = r.abs_gap;
  out.float_estimate = r.float_estimate;
  out.truncation_estimate = r.truncation_estimate;
  out.mc_estimate = r.mc_estimate;
  out.tolerance = r.tolerance();
  out.passed = r.passed;
  return out;
}

CheckResult gap_check(std::string name, cplx lhs, cplx rhs,
                      double float_estimate, double truncation_estimate) {
  CheckResult out;
  out.check = std::move(name);
  out.lhs = lhs;
  out.rhs = rhs;
  out.abs_gap = std::abs(lhs - rhs);
  out.float_estimate = float_estimate;
  out.truncation_estimate = truncation_estimate;
  out.tolerance = float_estimate + truncation_estimate;
  out.passed = out.abs_gap <= out.tolerance;
  return out;
}

void run_verify_algebra(const ExperimentConfig& c, RunResult& r) {
  if (c.algebra.empty())
    throw ConfigError(c.name + ": verify-algebra needs at least one input");
  for (const AlgebraCase& a : c.algebra) {
    OperatorExpr in = [&] {
      try {
        return parse_operator(a.input, c.modes);
      } catch (const ParseError& err) {
        throw ConfigError(c.name + ": input '" + a.input + "': " +
                          err.what());
      }
    }();
    std::string got;
    if (a.op == "rewrite")
      got = rewrite_to_normal_form(in).str();
    else if (a.op == "normal-product")
      got = normal_product(in).str();
    else
      throw ConfigError(c.name + ": unknown algebra op '" + a.op + "'");

    CheckResult check;
    check.check = a.op + ": " + a.input;
    check.lhs_text = got;
    check.rhs_text = a.expected;
    check.abs_gap = got == a.expected ? 0.0 : 1.0;
    check.passed = got == a.expected;
    r.checks.push_back(std::move(check));
  }
}

void run_verify_eq8(const ExperimentConfig& c, RunResult& r) {
  const Ensemble e = make_ensemble(c);
  const FockBasis basis = resolve_basis(c, 1);
  r.cutoff = basis.cutoff();
  const DensityMatrix rho = density_from_ensemble(e, basis);

  const std::size_t j = static_cast<std::size_t>(c.mode_index - 1);
  double mean = 0.0;
  for (std::size_t k = 0; k < e.samples.size(); ++k)
    mean += e.weights[k] * (c.field == FieldKind::phi ? e.samples[k].phi[j]
                                                      : e.samples[k].pi[j]);

  const double lhs = expect_field(rho, c.mode_index, c.field);
  const char* kind = c.field == FieldKind::phi ? "phi" : "pi";
  r.checks.push_back(gap_check(
      std::string("field-mean-") + kind + "-mode-" +
          std::to_string(c.mode_index),
      cplx{lhs, 0.0}, cplx{mean, 0.0}, 1e-8,
      (1.0 + distribution_amplitude(c.distribution, c.modes)) *
          rho.truncation_tail));
}

void run_verify_eq9(const ExperimentConfig& c, RunResult& r) {
  if (c.observable.empty())
    throw ConfigError(c.name + ": verify-eq9 needs an observable");
  const PhiPiPolynomial g =
      parse_polynomial(c.observable, c.name, "observable", c.modes);
  const Ensemble e = make_ensemble(c);
  const FockBasis basis = resolve_basis(c, g.degree());
  r.cutoff = basis.cutoff();
  const DensityMatrix rho = density_from_ensemble(e, basis);

  cplx mean{0.0, 0.0};
  for (std::size_t k = 0; k < e.samples.size(); ++k)
    mean += e.weights[k] * g.evaluate(e.samples[k].phi, e.samples[k].pi);

  // The truncation layer follows the boundary-mass model: an operator of
  // this degree moves sqrt(tail) weight across the cutoff.
  const double trunc =
      40.0 * std::sqrt(std::max(rho.truncation_tail, 0.0)) *
      (1.0 + std::abs(mean));
  r.checks.push_back(gap_check("normal-expectation-ensemble",
                               expect_normal(rho, g), mean, 1e-8, trunc));

  const FockVector w = coherent_vector(e.samples.front(), basis);
  r.checks.push_back(gap_check(
      "normal-expectation-samplewise", expect_normal_pure(w, g),
      g.evaluate(e.samples.front().phi, e.samples.front().pi), 1e-8, trunc));
}

void run_verify_eq6(const ExperimentConfig& c, RunResult& r) {
  if (c.hamiltonian.empty())
    throw ConfigError(c.name + ": verify-eq6 needs a hamiltonian");
  const PhiPiPolynomial h =
      parse_polynomial(c.hamiltonian, c.name, "hamiltonian", c.modes);
  const HamiltonianSpec spec(c.modes, h);
  const Ensemble e = make_ensemble(c);
  const FockBasis basis = resolve_basis(c, h.degree());
  r.cutoff = basis.cutoff();

  const EquivalenceReport report =
      check_eq6(e, spec, c.mode_index, basis, c.fd_step, c.field);
  r.checks.push_back(from_report(report));

  CheckResult fd;
  fd.check = report.experiment + "-fd-cross-check";
  fd.lhs = cplx{report.fd_gap, 0.0};
  fd.abs_gap = report.fd_gap;
  fd.float_estimate = 1e-6;
  fd.tolerance = 1e-6;
  fd.passed = report.fd_gap <= fd.tolerance;
  r.checks.push_back(std::move(fd));
}

void run_eq10_gap(const ExperimentConfig& c, RunResult& r) {
  if (c.hamiltonian.empty() || c.observable.empty())
    throw ConfigError(c.name +
                      ": eq10-gap needs a hamiltonian and an observable");
  const PhiPiPolynomial h =
      parse_polynomial(c.hamiltonian, c.name, "hamiltonian", c.modes);
  const PhiPiPolynomial g =
      parse_polynomial(c.observable, c.name, "observable", c.modes);
  const Ensemble e = make_ensemble(c);
  const FockBasis basis =
      resolve_basis(c, std::max(h.degree(), g.degree()));
  r.cutoff = basis.cutoff();

  const EquivalenceReport report =
      eq10_gap(e, HamiltonianSpec(c.modes, h), g, basis, c.t, c.dt);
  CheckResult check = from_report(report);
  if (c.expect_anomaly) {
    check.check += "-anomaly";
    check.passed = check.abs_gap > 10.0 * check.tolerance;
  }
  r.checks.push_back(std::move(check));
}

void run_zero_point(const ExperimentConfig& c, RunResult& r) {
  const FockBasis basis = resolve_basis(c, 2);
  r.cutoff = basis.cutoff();
  const double want = c.modes / 2.0;

  r.checks.push_back(gap_check("ordering-constant",
                               cplx{zero_point_gap(basis), 0.0},
                               cplx{want, 0.0}, 1e-10, 0.0));
  if (c.has_distribution) {
    const Ensemble e = make_ensemble(c);
    const DensityMatrix rho = density_from_ensemble(e, basis);
    r.checks.push_back(gap_check("ordering-constant-ensemble",
                                 cplx{zero_point_gap(basis, rho), 0.0},
                                 cplx{want, 0.0}, 1e-10, 0.0));
  }
}

void run_extended_survey(const ExperimentConfig& c, RunResult& r) {
  const int cutoff = c.cutoff == 0 ? 10 : c.cutoff;
  r.cutoff = cutoff;
  const DoubledBasis basis(c.modes, cutoff);

  // Structural invariants first; the table itself is reported, not judged.
  double block_gap = 0.0;
  std::vector<ExtendedFieldOps> fields;
  for (int j = 1; j <= c.modes; ++j)
    fields.push_back(extended_field_ops(j, basis));
  for (int j = 0; j < c.modes; ++j)
    for (int k = j + 1; k < c.modes; ++k) {
      block_gap = std::max(
          block_gap, commutator(fields[j].phi, fields[k].phi).max_abs());
      block_gap = std::max(
          block_gap, commutator(fields[j].pi, fields[k].pi).max_abs());
    }
  r.checks.push_back(gap_check("block-commutation", cplx{block_gap, 0.0},
                               cplx{0.0, 0.0}, 0.0, 0.0));

  const OperatorMatrix two_step = interaction_picture(
      interaction_picture(fields[0].phi, basis, 0.25), basis, 0.5);
  const OperatorMatrix one_step =
      interaction_picture(fields[0].phi, basis, 0.75);
  r.checks.push_back(gap_check("picture-group-property",
                               cplx{(two_step - one_step).max_abs(), 0.0},
                               cplx{0.0, 0.0}, 1e-10, 0.0));

  std::vector<int> zeros(static_cast<std::size_t>(2 * c.modes), 0);
  const FockVector vacuum = FockVector::ket(basis.full, zeros);
  r.checks.push_back(gap_check(
      "charge-vacuum",
      cplx{g0_operator(basis).apply(vacuum).norm(), 0.0}, cplx{0.0, 0.0},
      0.0, 0.0));

  const auto times = c.times.empty() ? default_survey_times() : c.times;
  r.survey = survey_csv(commutator_survey(basis, times));
}

json check_json(const CheckResult& c) {
  json j{{"check", c.check},
         {"abs_gap", c.abs_gap},
         {"tolerance", c.tolerance},
         {"float_estimate", c.float_estimate},
         {"truncation_estimate", c.truncation_estimate},
         {"mc_estimate", c.mc_estimate},
         {"passed", c.passed}};
  if (c.lhs_text.empty() && c.rhs_text.empty()) {
    j["lhs_re"] = c.lhs.real();
    j["lhs_im"] = c.lhs.imag();
    j["rhs_re"] = c.rhs.real();
    j["rhs_im"] = c.rhs.imag();
  } else {
    j["lhs_text"] = c.lhs_text;
    j["rhs_text"] = c.rhs_text;
  }
  return j;
}

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path,
                const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << body;
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& fallback_name) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ConfigError(fallback_name + ": JSON syntax error at " +
                      line_column(json_text, err.byte) + ": " + err.what());
  }
  if (!doc.is_object())
    throw ConfigError(fallback_name + ": config must be a JSON object");

  ExperimentConfig c;
  c.name = doc.value("name", fallback_name);
  if (c.name.empty())
    fail(fallback_name, "name must not be empty");

  static const std::set<std::string> kinds{
      "verify-algebra", "verify-eq8", "verify-eq9",     "verify-eq6",
      "eq10-gap",       "zero-point", "extended-survey"};
  if (!doc.contains("experiment"))
    fail(c.name, "missing experiment kind");
  c.kind = doc.at("experiment").get<std::string>();
  if (!kinds.count(c.kind))
    fail(c.name, "unknown experiment kind '" + c.kind + "'");

  c.modes = doc.value("modes", 1);
  if (c.modes < 1)
    fail(c.name, "modes must be at least 1");

  if (doc.contains("cutoff")) {
    const json& cut = doc.at("cutoff");
    if (cut.is_string()) {
      if (cut.get<std::string>() != "auto")
        fail(c.name, "cutoff must be an integer or \"auto\"");
    } else {
      c.cutoff = cut.get<int>();
      if (c.cutoff < 1)
        fail(c.name, "cutoff must be positive");
    }
  }
  c.cutoff_tolerance = doc.value("cutoff_tolerance", 1e-12);
  if (!(c.cutoff_tolerance > 0.0 && c.cutoff_tolerance < 1.0))
    fail(c.name, "cutoff_tolerance must lie in (0, 1)");
  c.max_amplitude = doc.value("max_amplitude", 0.0);

  c.hamiltonian = doc.value("hamiltonian", "");
  c.observable = doc.value("observable", "");
  c.mode_index = doc.value("mode_index", 1);
  if (c.mode_index < 1 || c.mode_index > c.modes)
    fail(c.name, "mode_index out of range");

  const std::string variant = doc.value("variant", "phi");
  if (variant == "phi")
    c.field = FieldKind::phi;
  else if (variant == "pi")
    c.field = FieldKind::pi;
  else
    fail(c.name, "variant must be phi or pi");

  c.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("distribution")) {
    c.has_distribution = true;
    c.distribution = parse_distribution(doc.at("distribution"), c.name,
                                        c.modes, c.seed, &c.sample_count);
  }

  c.t = doc.value("t", 0.0);
  c.dt = doc.value("dt", 1e-3);
  c.fd_step = doc.value("fd_step", 1e-4);
  if (c.dt <= 0.0 || c.fd_step <= 0.0)
    fail(c.name, "dt and fd_step must be positive");

  const std::string method = doc.value("method", "rk4");
  if (method == "rk4")
    c.method = IntegrationMethod::rk4;
  else if (method == "midpoint")
    c.method = IntegrationMethod::implicit_midpoint;
  else
    fail(c.name, "method must be rk4 or midpoint");

  if (doc.contains("times")) {
    for (const auto& pair : doc.at("times")) {
      if (!pair.is_array() || pair.size() != 2)
        fail(c.name, "times entries must be [t, tprime] pairs");
      c.times.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
  }

  const std::string expect = doc.value("expect", "within-tolerance");
  if (expect == "exceeds-10x")
    c.expect_anomaly = true;
  else if (expect != "within-tolerance")
    fail(c.name, "expect must be within-tolerance or exceeds-10x");

  if (doc.contains("inputs")) {
    for (const auto& item : doc.at("inputs")) {
      AlgebraCase a;
      a.op = item.value("op", "rewrite");
      if (!item.contains("input") || !item.contains("expected"))
        fail(c.name, "algebra inputs need input and expected");
      a.input = item.at("input").get<std::string>();
      a.expected = item.at("expected").get<std::string>();
      c.algebra.push_back(std::move(a));
    }
  }

  c.output = doc.value("output", "");

  // Polynomials must parse at config time so bad text fails before any
  // numerics start.
  if (!c.hamiltonian.empty())
    parse_polynomial(c.hamiltonian, c.name, "hamiltonian", c.modes);
  if (!c.observable.empty())
    parse_polynomial(c.observable, c.name, "observable", c.modes);

  return c;
}

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult r;
  r.name = config.name;
  r.kind = config.kind;
  r.modes = config.modes;
  r.cutoff = config.cutoff;
  r.seed = config.has_distribution ? config.distribution.seed : config.seed;

  try {
    if (config.kind == "verify-algebra")
      run_verify_algebra(config, r);
    else if (config.kind == "verify-eq8")
      run_verify_eq8(config, r);
    else if (config.kind == "verify-eq9")
      run_verify_eq9(config, r);
    else if (config.kind == "verify-eq6")
      run_verify_eq6(config, r);
    else if (config.kind == "eq10-gap")
      run_eq10_gap(config, r);
    else if (config.kind == "zero-point")
      run_zero_point(config, r);
    else
      run_extended_survey(config, r);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& err) {
    throw std::runtime_error(config.name + " (" + config.kind +
                             "): " + err.what());
  }

  r.passed = std::all_of(r.checks.begin(), r.checks.end(),
                         [](const CheckResult& c) { return c.passed; });
  return r;
}

std::string report_json(const RunResult& r, const std::string& timestamp) {
  json checks = json::array();
  for (const CheckResult& c : r.checks)
    checks.push_back(check_json(c));
  json doc{{"name", r.name},       {"experiment", r.kind},
           {"modes", r.modes},     {"cutoff", r.cutoff},
           {"seed", r.seed},       {"passed", r.passed},
           {"checks", checks},     {"timestamp", timestamp}};
  if (!r.survey.empty())
    doc["survey_rows"] =
        std::count(r.survey.begin(), r.survey.end(), '\n') - 1;
  return doc.dump(2) + "\n";
}

std::string summary_csv(const RunResult& r) {
  if (!r.survey.empty())
    return r.survey;
  std::string out =
      "check,lhs_re,lhs_im,rhs_re,rhs_im,abs_gap,tolerance,passed\n";
  for (const CheckResult& c : r.checks) {
    out += c.check + "," + format_double(c.lhs.real()) + "," +
           format_double(c.lhs.imag()) + "," + format_double(c.rhs.real()) +
           "," + format_double(c.rhs.imag()) + "," +
           format_double(c.abs_gap) + "," + format_double(c.tolerance) +
           "," + (c.passed ? "1" : "0") + "\n";
  }
  return out;
}

int run_config_file(const std::filesystem::path& config_path,
                    const std::filesystem::path& out_root,
                    std::string* error) {
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      if (error)
        *error = "cannot read " + config_path.string();
      return 2;
    }
    const std::string text{std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>()};
    const ExperimentConfig config =
        parse_config(text, config_path.stem().string());
    const std::filesystem::path root =
        out_root.empty() ? resolve_output_root("", config.output) : out_root;
    std::filesystem::create_directories(root);

    const RunResult result = run_experiment(config);
    write_file(root / (result.name + ".report.json"),
               report_json(result, timestamp_utc()));
    write_file(root / (result.name + ".summary.csv"), summary_csv(result));
    return result.passed ? 0 : 1;
  } catch (const ConfigError& err) {
    if (error)
      *error = err.what();
    return 2;
  } catch (const std::exception& err) {
    if (error)
      *error = err.what();
    return 2;
  }
}

int run_suite(const std::filesystem::path& config_dir,
              const std::filesystem::path& out_root, std::string* error) {
  if (!std::filesystem::is_directory(config_dir)) {
    if (error)
      *error = "not a directory: " + config_dir.string();
    return 2;
  }
  std::vector<std::filesystem::path> configs;
  for (const auto& entry : std::filesystem::directory_iterator(config_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      configs.push_back(entry.path());
  std::sort(configs.begin(), configs.end());

  const std::filesystem::path root =
      out_root.empty() ? resolve_output_root("", "") : out_root;
  std::filesystem::create_directories(root);

  json rows = json::array();
  std::string csv = "config,experiment,checks,failures,status\n";
  int exit_code = 0;
  for (const auto& path : configs) {
    std::string config_error;
    json row{{"config", path.filename().string()}};
    // Re-run through the single-file path so outputs and exit semantics
    // stay identical between run and suite.
    const int code = run_config_file(path, root, &config_error);
    exit_code = std::max(exit_code, code);
    if (code == 2) {
      row["status"] = "error";
      row["error"] = config_error;
      csv += path.filename().string() + ",,0,0,error\n";
    } else {
      std::ifstream in(root / (path.stem().string() + ".report.json"));
      const json report = json::parse(in);
      const std::size_t failures = std::count_if(
          report.at("checks").begin(), report.at("checks").end(),
          [](const json& c) { return !c.at("passed").get<bool>(); });
      row["experiment"] = report.at("experiment");
      row["checks"] = report.at("checks").size();
      row["failures"] = failures;
      row["status"] = code == 0 ? "pass" : "fail";
      csv += path.filename().string() + "," +
             report.at("experiment").get<std::string>() + "," +
             std::to_string(report.at("checks").size()) + "," +
             std::to_string(failures) + "," +
             (code == 0 ? "pass" : "fail") + "\n";
    }
    rows.push_back(std::move(row));
  }

  json aggregate{{"configs", rows},
                 {"passed", exit_code == 0},
                 {"timestamp", timestamp_utc()}};
  write_file(root / "aggregate.json", aggregate.dump(2) + "\n");
  write_file(root / "aggregate.csv", csv);
  return exit_code;
}

std::filesystem::path resolve_output_root(const std::string& cli_path,
                                          const std::string& config_output) {
  if (!cli_path.empty())
    return cli_path;
  if (const char* env = std::getenv("FOCKBRIDGE_OUTPUT_ROOT"))
    if (*env)
      return env;
  if (!config_output.empty())
    return config_output;
  return ".";
}

} // namespace fockbridge
