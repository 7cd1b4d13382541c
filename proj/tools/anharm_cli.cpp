#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anharm/asym.hpp"
#include "anharm/error.hpp"
#include "anharm/io.hpp"
#include "anharm/parallel.hpp"
#include "anharm/pseudo.hpp"
#include "anharm/semigroup.hpp"
#include "anharm/spectra.hpp"

namespace fs = std::filesystem;
using namespace anharm;
using nlohmann::json;

namespace {

struct Common {
  double m = 2.0;
  double theta = 0.0;
  std::string output;
  std::string format = "csv";
  int threads = 0;
  int basis_size = 0;
  double scale = 0.0;
  double fd_half_width = 20.0;
  int fd_points = 0;
};

struct Range {
  int lo = 1, hi = 10;
};

Range parse_range(const std::string& s) {
  Range r;
  char sep = 0;
  std::istringstream in(s);
  if (!(in >> r.lo >> sep >> r.hi) || sep != ':' || !in.eof() || r.lo < 1 || r.hi < r.lo) {
    throw Error(ErrorKind::config_error, "bad range '" + s + "', expected a:b with 1 <= a <= b");
  }
  return r;
}

std::pair<double, double> parse_pair(const std::string& s, char want) {
  double a = 0.0, b = 0.0;
  char sep = 0;
  std::istringstream in(s);
  if (!(in >> a >> sep >> b) || sep != want || !in.eof()) {
    throw Error(ErrorKind::config_error, std::string("bad value '") + s + "', expected a" + want + "b");
  }
  return {a, b};
}

pseudo::Window parse_window(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ':')) v.push_back(std::stod(part));
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) {
    throw Error(ErrorKind::config_error, "bad window '" + s + "', expected re_lo:re_hi:im_lo:im_hi");
  }
  return {v[0], v[1], v[2], v[3]};
}

spectra::DiscretizationConfig discretization(const Common& c) {
  spectra::DiscretizationConfig cfg;
  cfg.basis_size = c.basis_size;
  cfg.hermite_scale = c.scale;
  cfg.fd_half_width = c.fd_half_width;
  if (c.fd_points > 0) cfg.fd_points = c.fd_points;
  return cfg;
}

json echo(const Common& c) {
  return {{"m", c.m},           {"theta", c.theta},         {"format", c.format},
          {"threads", c.threads}, {"basis_size", c.basis_size}, {"scale", c.scale},
          {"fd_half_width", c.fd_half_width}, {"fd_points", c.fd_points}};
}

std::string render(const io::Table& t, const std::string& format) {
  return format == "json" ? t.json().dump(2) + "\n" : t.csv();
}

// Writes the table to --output (plus a sidecar) or to stdout.
void emit(const Common& c, const io::Table& t, const std::string& command, const json& config, double seconds) {
  if (c.output.empty()) {
    std::cout << render(t, c.format);
    return;
  }
  io::write_file(c.output, render(t, c.format));
  io::write_file(c.output + ".meta.json", io::sidecar(command, config, seconds).dump(2) + "\n");
}

std::string flag_of(const InstabilityRecord& r) {
  if (r.denominator_underflow) return "denominator_underflow";
  if (r.clipped) return "clipped";
  return "ok";
}

std::vector<int> iota(int lo, int hi) {
  std::vector<int> v;
  for (int n = lo; n <= hi; ++n) v.push_back(n);
  return v;
}

std::vector<InstabilityRecord> kappa_by_method(const OperatorSpec& spec, Method method, const Range& r,
                                               const spectra::DiscretizationConfig& cfg) {
  std::vector<InstabilityRecord> out;
  switch (method) {
    case Method::galerkin:
      return spectra::kappa_galerkin_range(spec, cfg, r.lo, r.hi);
    case Method::airy:
      if (!spec.is_airy()) throw Error(ErrorKind::config_error, "method airy needs m = 1");
      for (int n = r.lo; n <= r.hi; ++n) out.push_back(spectra::kappa_airy_fullline(spec.theta, n));
      return out;
    case Method::harmonic_exact:
      if (spec.is_airy() || *spec.k != 1) throw Error(ErrorKind::config_error, "method harmonic-exact needs m = 2");
      for (int n = r.lo; n <= r.hi; ++n) out.push_back(spectra::kappa_harmonic_exact(spec.theta, n));
      return out;
    case Method::ray:
      if (spec.is_airy()) throw Error(ErrorKind::config_error, "method ray needs even m");
      return spectra::kappa_ray_range(*spec.k, spec.theta, r.lo, r.hi, cfg);
  }
  return out;
}

double log_prediction(const OperatorSpec& spec, int n) {
  if (!spec.is_airy() || spec.theta == 0.0) return NAN;
  return asym::airy_kappa_prediction(spec.theta, n).log_kappa;
}

// ---- commands --------------------------------------------------------------

void cmd_spectrum(const Common& c, int n) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSpec spec = validate_spec(c.m, c.theta);
  if (n < 1) throw Error(ErrorKind::config_error, "--n must be positive");
  const auto records = spectra::spectrum(spec, n, discretization(c));
  const std::string method = spec.is_airy() ? "airy" : (*spec.k == 1 ? "harmonic-exact" : "galerkin");
  io::Table t;
  t.header = {"n", "re", "im", "abs", "method"};
  for (const EigenRecord& r : records) {
    t.add({std::to_string(r.n), io::num(r.lambda.real()), io::num(r.lambda.imag()), io::num(std::abs(r.lambda)),
           method});
  }
  json cfg = echo(c);
  cfg["n"] = n;
  emit(c, t, "spectrum", cfg, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void cmd_kappa(const Common& c, const std::string& range, const std::string& method_name) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSpec spec = validate_spec(c.m, c.theta);
  const Range r = parse_range(range);
  std::vector<InstabilityRecord> records;
  if (method_name == "auto") {
    records = spectra::kappa_auto(spec, iota(r.lo, r.hi), discretization(c));
  } else {
    const auto method = parse_method(method_name);
    if (!method) throw Error(ErrorKind::config_error, "unknown method '" + method_name + "'");
    records = kappa_by_method(spec, *method, r, discretization(c));
  }
  io::Table t;
  t.header = {"n", "kappa", "log_kappa", "method", "err_estimate", "flag", "log_prediction"};
  for (const InstabilityRecord& rec : records) {
    t.add({std::to_string(rec.n), io::num(rec.kappa), io::num(rec.log_kappa), std::string(to_string(rec.method)),
           io::num(rec.err_estimate), flag_of(rec), io::num(log_prediction(spec, rec.n))});
  }
  json cfg = echo(c);
  cfg["n_range"] = range;
  cfg["method"] = method_name;
  emit(c, t, "kappa", cfg, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void cmd_asymptotics(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSpec spec = validate_spec(c.m, c.theta);
  const asym::AsymptoticConstants k = asym::constants(spec);
  io::Table t;
  t.header = {"name", "value"};
  if (k.airy) {
    t.add({"m_theta", io::num(k.airy->m_theta)});
    t.add({"C", io::num(k.airy->C)});
    t.add({"K", io::num(k.airy->K)});
  }
  if (k.xi) t.add({"xi", io::num(*k.xi)});
  if (k.phi_at_xi) t.add({"phi_at_xi", io::num(*k.phi_at_xi)});
  if (k.c) t.add({"c", io::num(*k.c)});
  if (k.T) {
    const double davies = asym::c1_davies(spec.theta);
    t.add({"c1_davies", io::num(davies)});
    t.add({"c1_delta", io::num(std::abs(*k.c - davies))});
    t.add({"T", io::num(*k.T)});
    t.add({"T_half", io::num(0.5 * *k.T)});
  }
  emit(c, t, "asymptotics", echo(c), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void cmd_compare(const Common& c, const std::string& range) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSpec spec = validate_spec(c.m, c.theta);
  if (spec.selfadjoint()) throw Error(ErrorKind::sector_violation, "compare needs theta != 0");
  const Range r = parse_range(range);
  const auto records = spectra::kappa_auto(spec, iota(r.lo, r.hi), discretization(c));
  const double rate = spec.is_airy() ? asym::airy_constants(spec.theta).C : asym::c_k(*spec.k, spec.theta);
  io::Table t;
  t.header = {"n", "kappa", "log_kappa", "log_prediction", "ratio", "local_rate", "rate_prediction", "rate_ratio"};
  double prev = NAN;
  for (const InstabilityRecord& rec : records) {
    const double lp = log_prediction(spec, rec.n);
    const double y = rec.log_kappa + 0.5 * std::log(static_cast<double>(rec.n));
    const double local = y - prev;
    prev = y;
    t.add({std::to_string(rec.n), io::num(rec.kappa), io::num(rec.log_kappa), io::num(lp),
           io::num(std::exp(rec.log_kappa - lp)), io::num(local), io::num(rate), io::num(local / rate)});
  }
  json cfg = echo(c);
  cfg["n_range"] = range;
  emit(c, t, "compare", cfg, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

struct PseudoOptions {
  std::string window;
  std::string grid = "300x300";
  std::vector<double> eps = {1e-3, 1e-4};
  int n_check = 5;
  int scatter = 0;
  std::uint64_t seed = 1;
  bool local = true;
};

pseudo::Window default_window(const std::vector<cplx>& ev, int n_check) {
  const int count = std::min<int>(n_check, static_cast<int>(ev.size()));
  double re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
  for (int i = 0; i < count; ++i) {
    re_hi = std::max(re_hi, ev[i].real());
    im_lo = std::min(im_lo, ev[i].imag());
    im_hi = std::max(im_hi, ev[i].imag());
  }
  const double pad = 0.15 * std::abs(ev[count - 1]) + 0.5;
  return {-pad, re_hi + pad, im_lo - pad, im_hi + pad};
}

void cmd_pseudospectrum(Common c, const PseudoOptions& p) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSpec spec = validate_spec(c.m, c.theta);
  const auto [gx, gy] = parse_pair(p.grid, 'x');
  const int nx = static_cast<int>(gx), ny = static_cast<int>(gy);
  if (nx < 2 || ny < 2) throw Error(ErrorKind::config_error, "--grid needs at least 2x2 points");
  if (p.eps.empty()) throw Error(ErrorKind::config_error, "--eps needs at least one value");
  for (double e : p.eps) {
    if (!(e > 0.0)) throw Error(ErrorKind::config_error, "--eps values must be positive");
  }
  if (p.scatter < 0) throw Error(ErrorKind::config_error, "--scatter must be >= 0");
  if (p.n_check < 1) throw Error(ErrorKind::config_error, "--n-check must be positive");

  spectra::DiscretizationConfig cfg = discretization(c);
  if (spec.is_airy() && c.fd_points == 0) cfg.fd_points = 400;
  if (!spec.is_airy() && cfg.basis_size == 0) cfg.basis_size = 200;
  if (!spec.is_airy() && cfg.hermite_scale == 0.0 && *spec.k == 1) cfg.hermite_scale = 1.0;
  cfg = spectra::resolve_config(spec, cfg, p.n_check);
  const spectra::OperatorMatrix matrix = spectra::build_matrix(spec, cfg);
  const pseudo::ResolventKernel kernel(matrix);

  const int want = std::min(matrix.size(), std::max(4 * p.n_check, 20));
  std::vector<cplx> ev;
  for (const EigenRecord& r : spectra::eigenpairs(matrix, want, false)) ev.push_back(r.lambda);
  const pseudo::Window window = p.window.empty() ? default_window(ev, p.n_check) : parse_window(p.window);

  const pseudo::PseudospectrumField field = pseudo::resolvent_grid(spec, cfg, window, nx, ny);
  const pseudo::ContourSet set = pseudo::contours(field, p.eps, ev);
  const auto records = spectra::kappa_auto(spec, iota(1, p.n_check), cfg);

  std::vector<pseudo::PerimeterResult> report = pseudo::perimeter_check(set, records, &kernel);
  if (p.local) {
    // eigenvalue/epsilon pairs the global grid could not resolve get a zoomed window
    for (const InstabilityRecord& rec : records) {
      for (double e : p.eps) {
        const bool done = std::any_of(report.begin(), report.end(), [&](const pseudo::PerimeterResult& r) {
          return r.n == rec.n && r.epsilon == e && r.checked;
        });
        if (done) continue;
        pseudo::PerimeterResult local = pseudo::local_perimeter_check(matrix, kernel, ev, rec, e, 120);
        local.note = local.note.empty() ? "local window" : "local window; " + local.note;
        report.push_back(std::move(local));
      }
    }
  }
  std::stable_sort(report.begin(), report.end(), [](const auto& a, const auto& b) {
    return a.n != b.n ? a.n < b.n : a.epsilon > b.epsilon;
  });

  const std::string prefix = c.output.empty() ? "pseudospectrum" : c.output;
  const std::string ext = c.format == "json" ? ".json" : ".csv";
  io::write_file(prefix + "_field" + ext, render(io::field_table(field), c.format));
  io::write_file(prefix + "_contours.json", io::contours_json(set).dump(1) + "\n");
  io::write_file(prefix + "_perimeter" + ext, render(io::perimeter_table(report), c.format));

  json extra = json::object();
  if (p.scatter > 0) {
    const double eps = p.eps.front();
    const auto trials = pseudo::perturbation_scatter(matrix, eps, p.scatter, p.seed);
    io::write_file(prefix + "_scatter" + ext, render(io::scatter_table(trials), c.format));
    const pseudo::ContainmentReport cr = pseudo::scatter_containment(kernel, trials, eps);
    io::Table disks;
    disks.header = {"n", "kappa_matrix", "max_distance", "c_fit"};
    for (const pseudo::DiskFit& f : pseudo::disk_fit(matrix, trials, eps, p.n_check)) {
      disks.add({std::to_string(f.n), io::num(f.kappa), io::num(f.max_distance), io::num(f.c_fit)});
    }
    io::write_file(prefix + "_disks" + ext, render(disks, c.format));
    extra["scatter"] = {{"epsilon", eps}, {"points", cr.points}, {"outside_1.05eps", cr.outside},
                        {"worst_ratio", cr.worst_ratio}};
  }

  json cfg_echo = echo(c);
  cfg_echo["window"] = {window.re_lo, window.re_hi, window.im_lo, window.im_hi};
  cfg_echo["grid"] = p.grid;
  cfg_echo["eps"] = p.eps;
  cfg_echo["n_check"] = p.n_check;
  cfg_echo["scatter"] = p.scatter;
  cfg_echo["seed"] = p.seed;
  json meta = io::sidecar("pseudospectrum", cfg_echo,
                          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  meta["matrix_size"] = field.matrix_size;
  meta["trusted_radius"] = field.trusted_radius;
  meta["n_stability"] = field.stability;
  meta["open_lines"] = set.open_lines;
  meta["note"] = "perimeter inequality checked on the matrix truncation";
  meta.update(extra);
  io::write_file(prefix + ".meta.json", meta.dump(2) + "\n");
  std::cout << "wrote " << prefix << "_field" << ext << ", " << prefix << "_contours.json, " << prefix
            << "_perimeter" << ext << (p.scatter > 0 ? ", " + prefix + "_scatter" + ext : std::string()) << "\n";
}

struct SemigroupOptions {
  std::vector<double> t;
  std::string scan;
  std::vector<int> remainder;
  int n_max = 0;
};

void cmd_semigroup(const Common& c, const SemigroupOptions& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSpec spec = validate_spec(c.m, c.theta);
  if (s.t.empty() && s.scan.empty()) throw Error(ErrorKind::config_error, "give --t or --scan");
  std::vector<int> indices = semigroup::default_indices(spec);
  if (s.n_max > 0) {
    if (spec.is_airy()) {
      std::vector<int> kept;
      for (int n : indices) {
        if (n <= s.n_max) kept.push_back(n);
      }
      indices = kept;
    } else {
      indices = iota(1, s.n_max);
    }
  }
  const semigroup::SeriesTable table = semigroup::build_table(spec, indices, discretization(c));

  std::vector<semigroup::SeriesReport> reports(s.t.size());
  parallel_for(static_cast<long>(s.t.size()), [&](long i) { reports[i] = semigroup::term_norms(table, s.t[i]); });

  io::Table terms;
  terms.header = {"t", "n", "log_term_norm", "classification", "tail_slope"};
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.n.size(); ++i) {
      terms.add({io::num(r.t), std::to_string(r.n[i]), io::num(r.log_term[i]),
                 r.divergent ? "divergent" : "convergent", io::num(r.tail_slope)});
    }
  }

  std::vector<std::pair<std::string, io::Table>> extra;
  if (!s.scan.empty()) {
    const auto [a, b] = parse_pair(s.scan, ':');
    const semigroup::ThresholdScan sc = semigroup::threshold_scan(table, a, b);
    io::Table t;
    t.header = {"estimate", "lo", "hi", "candidate_T", "candidate_half", "bracketed"};
    t.add({io::num(sc.estimate), io::num(sc.lo), io::num(sc.hi), io::num(sc.candidate_T),
           io::num(sc.candidate_half), sc.bracketed()});
    extra.emplace_back("scan", std::move(t));
  }
  if (!s.remainder.empty()) {
    io::Table t;
    t.header = {"t", "N", "log_tail", "fitted_rate", "predicted", "predicted_T", "predicted_half"};
    for (const auto& r : reports) {
      if (r.divergent) {
        std::cerr << "note: t = " << r.t << " is divergent, no remainder fit\n";
        continue;
      }
      const double tt = r.t;
      const semigroup::RemainderFit f = semigroup::remainder_shape(table, s.remainder, tt);
      for (std::size_t i = 0; i < f.N.size(); ++i) {
        t.add({io::num(f.t), std::to_string(f.N[i]), io::num(f.log_tail[i]), io::num(f.fitted_rate),
               io::num(f.predicted), io::num(f.predicted_T), io::num(f.predicted_half)});
      }
    }
    extra.emplace_back("remainder", std::move(t));
  }

  json cfg = echo(c);
  cfg["t"] = s.t;
  cfg["scan"] = s.scan;
  cfg["remainder"] = s.remainder;
  cfg["n_max"] = s.n_max;
  cfg["note"] = "tail bound is the sum of term norms, not the semigroup remainder norm";
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.output.empty()) {
    if (!s.t.empty()) std::cout << render(terms, c.format);
    for (const auto& [name, t] : extra) std::cout << "\n" << render(t, c.format);
    return;
  }
  const fs::path out(c.output);
  const std::string stem = (out.parent_path() / out.stem()).string();
  const std::string ext = out.has_extension() ? out.extension().string() : (c.format == "json" ? ".json" : ".csv");
  io::write_file(c.output, render(terms, c.format));
  for (const auto& [name, t] : extra) io::write_file(stem + "_" + name + ext, render(t, c.format));
  io::write_file(c.output + ".meta.json", io::sidecar("semigroup", cfg, seconds).dump(2) + "\n");
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--m", c.m, "exponent: 1 or an even positive integer")->required();
  cmd->add_option("--theta", c.theta, "potential rotation angle");
  cmd->add_option("--output,-o", c.output, "output file (prefix for pseudospectrum)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", c.threads, "worker threads (default: all)")->envname("ANHARM_THREADS");
  cmd->add_option("--basis-size", c.basis_size, "Hermite basis size (0: automatic)");
  cmd->add_option("--scale", c.scale, "Hermite scale (0: automatic)");
  cmd->add_option("--fd-half-width", c.fd_half_width, "finite-difference half width L for m = 1");
  cmd->add_option("--fd-points", c.fd_points, "finite-difference interior points for m = 1");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, instability indices and pseudospectra of -d^2/dx^2 + exp(i theta)|x|^m"};
  app.set_config("--config", "", "TOML or INI file with the same keys as the flags");
  app.require_subcommand(1);

  Common common;
  int n = 10;
  std::string range = "1:10";
  std::string method = "auto";
  PseudoOptions pseudo_opts;
  std::string eps_list;
  SemigroupOptions semi;

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues sorted by modulus");
  add_common(spectrum, common);
  spectrum->add_option("--n", n, "number of eigenvalues");

  CLI::App* kappa = app.add_subcommand("kappa", "instability indices");
  add_common(kappa, common);
  kappa->add_option("--n-range", range, "a:b");
  kappa->add_option("--method", method, "auto, galerkin, airy, harmonic-exact or ray");

  CLI::App* asymptotics = app.add_subcommand("asymptotics", "asymptotic constants");
  add_common(asymptotics, common);

  CLI::App* compare = app.add_subcommand("compare", "kappa against its asymptotic law");
  add_common(compare, common);
  compare->add_option("--n-range", range, "a:b");

  CLI::App* pseudospectrum = app.add_subcommand("pseudospectrum", "resolvent-norm field, contours, checks");
  add_common(pseudospectrum, common);
  pseudospectrum->add_option("--window", pseudo_opts.window, "re_lo:re_hi:im_lo:im_hi");
  pseudospectrum->add_option("--grid", pseudo_opts.grid, "NxM grid points");
  pseudospectrum->add_option("--eps", pseudo_opts.eps, "comma-separated levels")->delimiter(',');
  pseudospectrum->add_option("--n-check", pseudo_opts.n_check, "eigenvalues to run the perimeter check on");
  pseudospectrum->add_option("--scatter", pseudo_opts.scatter, "random perturbation trials at the first eps");
  pseudospectrum->add_option("--seed", pseudo_opts.seed, "scatter seed");
  pseudospectrum->add_flag("!--no-local", pseudo_opts.local, "skip zoomed windows for unresolved components");

  CLI::App* semigroup = app.add_subcommand("semigroup", "normal convergence of the semigroup series");
  add_common(semigroup, common);
  semigroup->add_option("--t", semi.t, "comma-separated times")->delimiter(',');
  semigroup->add_option("--scan", semi.scan, "t0:t1 threshold scan (m = 2)");
  semigroup->add_option("--remainder", semi.remainder, "comma-separated N for the remainder fit")->delimiter(',');
  semigroup->add_option("--n-max", semi.n_max, "largest tabulated index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(common.threads);
    if (spectrum->parsed()) cmd_spectrum(common, n);
    if (kappa->parsed()) cmd_kappa(common, range, method);
    if (asymptotics->parsed()) cmd_asymptotics(common);
    if (compare->parsed()) cmd_compare(common, range);
    if (pseudospectrum->parsed()) cmd_pseudospectrum(common, pseudo_opts);
    if (semigroup->parsed()) cmd_semigroup(common, semi);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
