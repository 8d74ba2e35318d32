// Command-line front end: parse a graph document, dispatch to the solvers,
// emit deterministic reports. Exit codes: 0 success, 1 verify threshold
// exceeded (or unexpected failure), 2 parse/flag error, 3 solver
// non-convergence.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphpde/graphpde.hpp"

namespace {

using graphpde::cplx;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string fmt_e(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", v);
  return buf;
}

struct Options {
  std::string graphPath;
  std::string outputPath;
  std::string format = "table";
  std::vector<double> times;
  double tMax = 0.0;
  int samples = 0;
  bool hasTMax = false;
  double p = 3.0;
  double horizon = 0.0;
  bool hasHorizon = false;
  double substep = 0.01;
  double tol = 0.0;
  bool hasTol = false;
  int maxIters = 50000;
  std::uint64_t seed = 1;
};

std::vector<double> resolve_times(const Options& opt) {
  if (!opt.times.empty()) return opt.times;
  if (!opt.hasTMax) throw std::invalid_argument("either --times or --t-max/--samples is required");
  if (!(opt.tMax > 0.0)) throw std::invalid_argument("--t-max must be positive");
  if (opt.samples < 1) throw std::invalid_argument("--samples must be at least 1");
  std::vector<double> times(static_cast<std::size_t>(opt.samples) + 1);
  for (int i = 0; i <= opt.samples; ++i) times[i] = opt.tMax * i / opt.samples;
  return times;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
}

const graphpde::GraphFunction& require_initial(const graphpde::GraphDocument& doc) {
  if (!doc.initial)
    throw graphpde::ParseError("graph document has no 'initial' section (required here)");
  return *doc.initial;
}

// ---------------------------------------------------------------- spectrum

std::string report_spectrum(const graphpde::Spectrum& spec, const std::string& format) {
  const auto& dom = spec.domain();
  const int n = spec.size();
  if (format == "structured") {
    nlohmann::ordered_json doc;
    doc["interior_count"] = n;
    doc["eigenvalues"] = nlohmann::ordered_json::array();
    for (int j = 0; j < n; ++j) doc["eigenvalues"].push_back(spec.eigenvalue(j));
    doc["eigenvectors"] = nlohmann::ordered_json::object();
    for (int x = 0; x < n; ++x) {
      auto row = nlohmann::ordered_json::array();
      for (int j = 0; j < n; ++j) row.push_back(spec.phi(j, x));
      doc["eigenvectors"][dom.id(x)] = std::move(row);
    }
    return doc.dump(2) + "\n";
  }
  std::string out = "# spectrum: " + std::to_string(n) + " interior vertices\n";
  out += "j lambda\n";
  for (int j = 0; j < n; ++j) out += std::to_string(j) + " " + fmt_g(spec.eigenvalue(j)) + "\n";
  out += "\n# eigenvectors (phi_j by interior vertex)\nvertex";
  for (int j = 0; j < n; ++j) out += " phi_" + std::to_string(j);
  out += "\n";
  for (int x = 0; x < n; ++x) {
    out += dom.id(x);
    for (int j = 0; j < n; ++j) out += " " + fmt_g(spec.phi(j, x));
    out += "\n";
  }
  return out;
}

// -------------------------------------------------------------- trajectory

struct DriftRow {
  std::string name;
  double initial;
  double maxAbs;
  double maxRel;
};

DriftRow drift_of(const std::string& name, const std::vector<double>& values) {
  DriftRow row{name, values.front(), 0.0, 0.0};
  const double ref = std::abs(values.front());
  for (const double v : values) row.maxAbs = std::max(row.maxAbs, std::abs(v - values.front()));
  row.maxRel = ref > 0.0 ? row.maxAbs / ref : row.maxAbs;
  return row;
}

std::vector<DriftRow> conserved_drifts(const std::string& equation,
                                       const graphpde::Trajectory& traj) {
  std::vector<double> mass, denergy, wenergy;
  for (const auto& rec : traj.conserved) {
    mass.push_back(rec.mass);
    denergy.push_back(rec.dirichletEnergy);
    if (rec.waveEnergy) wenergy.push_back(*rec.waveEnergy);
  }
  std::vector<DriftRow> rows;
  if (equation == "schrodinger") {
    rows.push_back(drift_of("mass", mass));
    rows.push_back(drift_of("dirichlet_energy", denergy));
  } else if (equation == "wave") {
    rows.push_back(drift_of("wave_energy", wenergy));
  } else {
    rows.push_back(drift_of("mass", mass));
  }
  return rows;
}

std::string report_trajectory(const std::string& equation, const graphpde::Trajectory& traj,
                              const std::string& format) {
  const auto& dom = traj.states.front().domain();
  const int n = dom.interior_count();
  const bool hasVelocity = !traj.velocities.empty();
  const auto drifts = conserved_drifts(equation, traj);

  if (format == "structured") {
    nlohmann::ordered_json doc;
    doc["equation"] = equation;
    doc["vertices"] = nlohmann::ordered_json::array();
    for (int x = 0; x < n; ++x) doc["vertices"].push_back(dom.id(x));
    doc["samples"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      nlohmann::ordered_json sample;
      sample["t"] = traj.times[i];
      sample["state"] = nlohmann::ordered_json::object();
      for (int x = 0; x < n; ++x) {
        const cplx v = traj.states[i][x];
        sample["state"][dom.id(x)] = {v.real(), v.imag()};
      }
      if (hasVelocity) {
        sample["velocity"] = nlohmann::ordered_json::object();
        for (int x = 0; x < n; ++x) {
          const cplx v = traj.velocities[i][x];
          sample["velocity"][dom.id(x)] = {v.real(), v.imag()};
        }
      }
      sample["mass"] = traj.conserved[i].mass;
      sample["dirichlet_energy"] = traj.conserved[i].dirichletEnergy;
      if (traj.conserved[i].waveEnergy) sample["wave_energy"] = *traj.conserved[i].waveEnergy;
      doc["samples"].push_back(std::move(sample));
    }
    doc["conservation"] = nlohmann::ordered_json::array();
    for (const auto& row : drifts) {
      doc["conservation"].push_back({{"quantity", row.name},
                                     {"initial", row.initial},
                                     {"max_abs_drift", row.maxAbs},
                                     {"max_rel_drift", row.maxRel}});
    }
    return doc.dump(2) + "\n";
  }

  std::string out = "# trajectory: " + equation + "\n";
  out += hasVelocity ? "t vertex re_u im_u re_ut im_ut\n" : "t vertex re_u im_u\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    for (int x = 0; x < n; ++x) {
      const cplx v = traj.states[i][x];
      out += fmt_g(traj.times[i]) + " " + dom.id(x) + " " + fmt_g(v.real()) + " " + fmt_g(v.imag());
      if (hasVelocity) {
        const cplx w = traj.velocities[i][x];
        out += " " + fmt_g(w.real()) + " " + fmt_g(w.imag());
      }
      out += "\n";
    }
  }
  out += "\n# conserved\nt mass dirichlet_energy";
  if (hasVelocity) out += " wave_energy";
  out += "\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out += fmt_g(traj.times[i]) + " " + fmt_g(traj.conserved[i].mass) + " " +
           fmt_g(traj.conserved[i].dirichletEnergy);
    if (traj.conserved[i].waveEnergy) out += " " + fmt_g(*traj.conserved[i].waveEnergy);
    out += "\n";
  }
  out += "\n# conservation summary\nquantity initial max_abs_drift max_rel_drift\n";
  for (const auto& row : drifts)
    out += row.name + " " + fmt_g(row.initial) + " " + fmt_e(row.maxAbs) + " " + fmt_e(row.maxRel) +
           "\n";
  return out;
}

// ------------------------------------------------------------ ground state

std::string report_ground_state(const graphpde::GroundStateProblem& prob,
                                const graphpde::GraphFunction& u,
                                const graphpde::GroundStateReport& rep,
                                const std::string& format) {
  const auto diag = nehari_functional(prob, u);
  const auto& dom = *prob.domain;
  if (format == "structured") {
    nlohmann::ordered_json doc;
    doc["state"] = nlohmann::ordered_json::object();
    for (int x = 0; x < dom.interior_count(); ++x) doc["state"][dom.id(x)] = u[x].real();
    doc["J"] = diag.J;
    doc["constraint_gap"] = diag.constraintGap;
    doc["el_residual"] = diag.elResidual;
    doc["iterations"] = rep.iterations;
    doc["restarts"] = rep.restarts;
    return doc.dump(2) + "\n";
  }
  std::string out = "# ground state\nvertex u\n";
  for (int x = 0; x < dom.interior_count(); ++x) out += dom.id(x) + " " + fmt_g(u[x].real()) + "\n";
  out += "\n# diagnostics\n";
  out += "J " + fmt_g(diag.J) + "\n";
  out += "constraint_gap " + fmt_e(diag.constraintGap) + "\n";
  out += "el_residual " + fmt_e(diag.elResidual) + "\n";
  out += "iterations " + std::to_string(rep.iterations) + "\n";
  out += "restarts " + std::to_string(rep.restarts) + "\n";
  return out;
}

// ----------------------------------------------------------------- verify

struct Check {
  std::string name;
  double residual;
  double threshold;
  bool ok() const { return residual <= threshold; }
};

graphpde::GraphFunction random_closure_function(const graphpde::DomainPtr& dom,
                                                graphpde::SplitMix64& rng) {
  std::vector<cplx> vals(static_cast<std::size_t>(dom->closure_count()));
  for (auto& v : vals) v = cplx(rng.normal(), rng.normal());
  auto f = graphpde::GraphFunction::on_closure(dom, std::move(vals));
  const double m = std::sqrt(mass_norm_sq(f));
  if (m > 0.0)
    for (int c = 0; c < dom->closure_count(); ++c) f[c] /= m;
  return f;
}

graphpde::GraphFunction random_dirichlet_function(const graphpde::DomainPtr& dom,
                                                  graphpde::SplitMix64& rng) {
  std::vector<cplx> vals(static_cast<std::size_t>(dom->interior_count()));
  for (auto& v : vals) v = cplx(rng.normal(), rng.normal());
  auto f = graphpde::GraphFunction::dirichlet(dom, std::move(vals));
  const double m = std::sqrt(mass_norm_sq(f));
  if (m > 0.0)
    for (int c = 0; c < dom->interior_count(); ++c) f[c] /= m;
  return f;
}

std::vector<Check> run_verify_checks(const graphpde::DomainPtr& dom, std::uint64_t seed) {
  graphpde::SplitMix64 rng(seed);
  const auto L = assemble(dom);
  const auto spec = eigendecompose(L);
  const int n = spec.size();
  std::vector<Check> checks;

  {
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
      const auto f = random_closure_function(dom, rng);
      const auto g = random_closure_function(dom, rng);
      const double scale = 1.0 + std::abs(laplacian_pairing(f, g));
      worst = std::max(worst, green_identity_residual(f, g) / scale);
    }
    checks.push_back({"green_identity", worst, 1e-12});
  }
  {
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
      const auto f = random_dirichlet_function(dom, rng);
      const cplx flux = boundary_flux_pairing(f);
      const double gradSq = boundary_gradient_sq(f);
      worst = std::max(worst, std::abs(flux - cplx(-gradSq, 0.0)));
      worst = std::max(worst, std::abs(flux.imag()));
    }
    checks.push_back({"boundary_term", worst, 1e-12});
  }
  {
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      double resSq = 0.0;
      for (int x = 0; x < n; ++x) {
        double acc = -spec.eigenvalue(j) * spec.phi(j, x);
        for (int y = 0; y < n; ++y) acc += L.matrix(x, y) * spec.phi(j, y);
        resSq += acc * acc;
      }
      worst = std::max(worst, std::sqrt(resSq));
    }
    checks.push_back({"eigen_residual", worst, 1e-10 * std::max(1.0, spec.max_eigenvalue())});
  }
  {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int x = 0; x < n; ++x) dot += spec.phi(i, x) * spec.phi(j, x);
        worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
      }
    checks.push_back({"orthonormality", worst, 1e-10});
  }
  {
    std::vector<double> ts = {0.1, 1.0, 5.0, rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    double worst = 0.0;
    for (const double t : ts) {
      const auto K = schrodinger_kernel(spec, t);
      worst = std::max(worst, graphpde::max_abs_diff_from_identity(product(K, adjoint(K))));
    }
    checks.push_back({"kernel_unitarity", worst, 1e-10});
  }
  {
    double worst = 0.0;
    for (int draw = 0; draw < 3; ++draw) {
      const double t = rng.uniform(-10.0, 10.0);
      const double s = rng.uniform(-10.0, 10.0);
      const auto lhs = schrodinger_kernel(spec, t + s);
      const auto rhs = product(schrodinger_kernel(spec, t), schrodinger_kernel(spec, s));
      worst = std::max(worst, graphpde::max_abs_diff(lhs, rhs));
    }
    checks.push_back({"kernel_group", worst, 1e-10});
  }
  return checks;
}

std::string report_verify(const std::string& path, std::uint64_t seed,
                          const std::vector<Check>& checks, const std::string& format) {
  bool allOk = true;
  for (const auto& c : checks) allOk = allOk && c.ok();
  if (format == "structured") {
    nlohmann::ordered_json doc;
    doc["graph"] = path;
    doc["seed"] = seed;
    doc["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks)
      doc["checks"].push_back({{"name", c.name},
                               {"max_residual", c.residual},
                               {"threshold", c.threshold},
                               {"ok", c.ok()}});
    doc["ok"] = allOk;
    return doc.dump(2) + "\n";
  }
  std::string out = "# verify: " + path + " (seed " + std::to_string(seed) + ")\n";
  out += "check max_residual threshold status\n";
  for (const auto& c : checks)
    out += c.name + " " + fmt_e(c.residual) + " " + fmt_e(c.threshold) + " " +
           (c.ok() ? "ok" : "FAILED") + "\n";
  out += "\n# result\n";
  out += allOk ? "ok\n" : "FAILED\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solvers for the Schrodinger, wave and nonlinear Schrodinger equations "
               "on finite graphs with Dirichlet boundary"};
  app.require_subcommand(1);

  Options opt;
  auto addCommon = [&opt](CLI::App* cmd) {
    cmd->add_option("graph", opt.graphPath, "graph document (JSON)")->required();
    cmd->add_option("-o,--output", opt.outputPath, "output file (default: standard output)");
    cmd->add_option("--format", opt.format, "table or structured")
        ->check(CLI::IsMember({"table", "structured"}));
  };
  auto addTimes = [&opt](CLI::App* cmd) {
    cmd->add_option("--times", opt.times, "explicit sample times")->delimiter(',');
    cmd->add_option("--t-max", opt.tMax, "end of the uniform sample grid")
        ->each([&opt](const std::string&) { opt.hasTMax = true; });
    cmd->add_option("--samples", opt.samples, "number of uniform steps (grid has N+1 samples)");
  };

  auto* spectrumCmd = app.add_subcommand("spectrum", "Dirichlet Laplacian eigenvalues/vectors");
  addCommon(spectrumCmd);

  auto* schrodingerCmd = app.add_subcommand("schrodinger", "linear Schrodinger evolution");
  addCommon(schrodingerCmd);
  addTimes(schrodingerCmd);

  auto* waveCmd = app.add_subcommand("wave", "wave evolution");
  addCommon(waveCmd);
  addTimes(waveCmd);

  auto* nlsCmd = app.add_subcommand("nls", "nonlinear Schrodinger evolution");
  addCommon(nlsCmd);
  addTimes(nlsCmd);
  nlsCmd->add_option("--p", opt.p, "nonlinearity exponent (> 1)");
  nlsCmd->add_option("--T", opt.horizon, "horizon (default: last sample time)")
      ->each([&opt](const std::string&) { opt.hasHorizon = true; });
  nlsCmd->add_option("--substep", opt.substep, "Duhamel restart length");
  nlsCmd->add_option("--tol", opt.tol, "Picard tolerance")
      ->each([&opt](const std::string&) { opt.hasTol = true; });

  auto* groundCmd = app.add_subcommand("ground-state", "Nehari ground state");
  addCommon(groundCmd);
  groundCmd->add_option("--p", opt.p, "nonlinearity exponent (> 1)");
  groundCmd->add_option("--tol", opt.tol, "Euler-Lagrange residual tolerance")
      ->each([&opt](const std::string&) { opt.hasTol = true; });
  groundCmd->add_option("--max-iters", opt.maxIters, "descent iteration budget");
  groundCmd->add_option("--seed", opt.seed, "seed for the initial state");

  auto* verifyCmd = app.add_subcommand("verify", "Green identity and propagator checks");
  addCommon(verifyCmd);
  verifyCmd->add_option("--seed", opt.seed, "seed for random data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto doc = graphpde::load_graph_document(opt.graphPath);

    if (spectrumCmd->parsed()) {
      emit(report_spectrum(eigendecompose(assemble(doc.domain)), opt.format), opt.outputPath);
      return 0;
    }
    if (schrodingerCmd->parsed()) {
      const auto traj = solve_schrodinger(doc.domain, require_initial(doc), resolve_times(opt));
      emit(report_trajectory("schrodinger", traj, opt.format), opt.outputPath);
      return 0;
    }
    if (waveCmd->parsed()) {
      if (!doc.initialVelocity)
        throw graphpde::ParseError(
            "graph document has no 'initial_velocity' section (required for wave)");
      const auto traj =
          solve_wave(doc.domain, require_initial(doc), *doc.initialVelocity, resolve_times(opt));
      emit(report_trajectory("wave", traj, opt.format), opt.outputPath);
      return 0;
    }
    if (nlsCmd->parsed()) {
      const auto times = resolve_times(opt);
      const double horizon =
          opt.hasHorizon ? opt.horizon : std::max(times.back(), opt.substep);
      graphpde::NlsProblem prob(doc.domain, opt.p, require_initial(doc), horizon);
      prob.substep = opt.substep;
      if (opt.hasTol) prob.picardTol = opt.tol;
      const auto traj = solve_nls(prob, times);
      emit(report_trajectory("nls", traj, opt.format), opt.outputPath);
      return 0;
    }
    if (groundCmd->parsed()) {
      graphpde::GroundStateProblem prob(doc.domain, opt.p, doc.potential);
      if (opt.hasTol) prob.tol = opt.tol;
      prob.maxIters = opt.maxIters;
      prob.seed = opt.seed;
      graphpde::GroundStateReport rep;
      const auto u = solve_ground_state(prob, &rep);
      emit(report_ground_state(prob, u, rep, opt.format), opt.outputPath);
      return 0;
    }
    if (verifyCmd->parsed()) {
      const auto checks = run_verify_checks(doc.domain, opt.seed);
      emit(report_verify(opt.graphPath, opt.seed, checks, opt.format), opt.outputPath);
      for (const auto& c : checks)
        if (!c.ok()) return 1;
      return 0;
    }
  } catch (const graphpde::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const graphpde::ConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
