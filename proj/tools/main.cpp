// diffuse: command-line front end for the closed-loop simulator.
//
// Exit status: 0 success, 1 contract violation, 2 I/O or configuration error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "diffuse/acceptance.hpp"
#include "diffuse/scenario_io.hpp"
#include "diffuse/simulator.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kContract = 1;
constexpr int kConfig = 2;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw diffuse::ConfigError("cannot write " + path);
  out << text;
  if (!out) throw diffuse::ConfigError("write failed for " + path);
}

int cmd_simulate(const std::string& scenario, const std::string& out, std::optional<std::uint64_t> seed,
                 bool no_diffusion) {
  auto cfg = diffuse::load_scenario(scenario);
  if (seed) cfg.seed = *seed;
  if (no_diffusion) cfg.diffusion_enabled = false;
  const auto trace = diffuse::run_scenario(cfg);
  write_file(out, diffuse::emit_csv(trace));
  std::cerr << "wrote " << trace.rows.size() << " steps to " << out << "\n";
  return kOk;
}

int cmd_verify(std::optional<std::uint64_t> seed) {
  diffuse::AcceptanceOptions opts;
  if (seed) opts.seed = *seed;
  const auto results = diffuse::run_acceptance(opts);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << diffuse::format_result(r) << "\n";
    if (!r.pass) ++failed;
  }
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? kOk : kContract;
}

int cmd_construct(const std::string& polygon, const std::string& out, std::size_t samples,
                  std::optional<std::uint64_t> seed) {
  auto req = diffuse::load_polygon_request(polygon);
  req.choice.verify_samples = samples;
  if (seed) req.choice.seed = *seed;
  const auto c = diffuse::build_pti_construction(req.polygon, req.choice);
  write_file(out, diffuse::construction_to_json(req.polygon, c));
  std::cerr << "superset with " << c.d.size() << " vertices, diameter " << diameter(c.d) << ", verified on "
            << c.verification.points_checked << " pairs\n";
  return kOk;
}

int cmd_bound(const std::string& scenario, std::size_t k_max) {
  auto cfg = diffuse::load_scenario(scenario);
  cfg.steps = 1;
  const auto trace = diffuse::run_scenario(cfg);
  double c2 = 0.0;
  for (double b : trace.error_bounds) c2 += b * b;
  const double c_norm = std::sqrt(c2);
  const diffuse::GridAgentConfig ga{cfg.alpha, diffuse::Unconstrained{}};
  const double r = diffuse::contraction_rate(*cfg.objective, cfg.alpha);
  (void)diffuse::theorem1_bound(*cfg.objective, ga, trace.x1, c_norm, 1);  // rejects r >= 1 before any output
  std::printf("r = %.9g, ||c|| = %.9g\n", r, c_norm);
  if (trace.rows[0].projection_active)
    std::printf("note: projection onto advertised profiles was active at k=1; the bound assumes it never is\n");
  std::printf("%12s %18s\n", "k", "bound");
  for (std::size_t k = 1; k <= k_max;) {
    std::printf("%12zu %18.9g\n", k, diffuse::theorem1_bound(*cfg.objective, ga, trace.x1, c_norm, k));
    if (k == k_max) break;
    const std::size_t d = static_cast<std::size_t>(std::pow(10.0, std::floor(std::log10(static_cast<double>(k)))));
    const std::size_t lead = k / d;
    std::size_t next = lead == 1 ? 2 * d : lead == 2 ? 5 * d : 10 * d;
    k = std::min(next, k_max);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error-diffusion setpoint tracking: simulation and verification"};
  app.require_subcommand(1);

  std::string scenario, out, polygon;
  std::optional<std::uint64_t> seed;
  bool no_diffusion = false;
  std::size_t samples = 10000;
  std::size_t k_max = 10000;

  auto* sim = app.add_subcommand("simulate", "run a scenario and write its CSV trace");
  sim->add_option("scenario", scenario, "scenario JSON")->required();
  sim->add_option("--out", out, "CSV output path")->required();
  sim->add_option("--seed", seed, "override the scenario seed");
  sim->add_flag("--no-diffusion", no_diffusion, "naive projection baseline");

  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  ver->add_option("--seed", seed, "suite seed");

  auto* pti = app.add_subcommand("construct-pti", "build and verify a PTI superset of a polygon");
  pti->add_option("polygon", polygon, "polygon JSON")->required();
  pti->add_option("--out", out, "JSON output path")->required();
  pti->add_option("--samples", samples, "verification samples");
  pti->add_option("--seed", seed, "sampling seed");

  auto* bnd = app.add_subcommand("bound", "print the averaged-convergence bound");
  bnd->add_option("--scenario", scenario, "scenario JSON")->required();
  bnd->add_option("--k", k_max, "largest k")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sim) return cmd_simulate(scenario, out, seed, no_diffusion);
    if (*ver) return cmd_verify(seed);
    if (*pti) return cmd_construct(polygon, out, samples, seed);
    if (*bnd) return cmd_bound(scenario, k_max);
  } catch (const diffuse::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const diffuse::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
