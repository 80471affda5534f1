#include <iostream>

#include <CLI11.hpp>

#include "subwave/io.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"subwave - subwavelength resonator chain spectra, topology and stability"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed_override = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* copt = sub->add_option("--config", config_path, "run configuration (JSON)");
    if (config_required) copt->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed_override, "override stability.seed")
        ->each([&](const std::string&) { seed_given = true; });
  };

  auto* bands = app.add_subcommand("bands", "band structure, Zak phase and gap report");
  add_common(bands, true);
  auto* modes = app.add_subcommand("modes", "finite-chain spectrum and eigenvectors");
  add_common(modes, true);
  auto* stab = app.add_subcommand("stability", "Monte Carlo perturbation experiment");
  add_common(stab, true);

  auto* lat = app.add_subcommand("lattice-sum", "quasiperiodic lattice sum diagnostic");
  subwave::LatticeSumArgs largs;
  lat->add_option("--lambda", largs.lambda, "harmonic degree");
  lat->add_option("--mu", largs.mu, "harmonic order");
  lat->add_option("--kL", largs.kL, "nondimensional wavenumber k*L");
  lat->add_option("--alphaL", largs.alphaL, "quasimomentum alpha*L");
  lat->add_option("--M", largs.M, "truncation");
  lat->add_option("--tail-tol", largs.tail_tol, "tail tolerance");
  lat->add_flag("--k0", largs.static_mode, "static mode: closed-form harmonic sum");
  lat->add_flag("--json", largs.as_json, "emit JSON");

  CLI11_PARSE(app, argc, argv);

  if (lat->parsed()) {
    subwave::cmd_lattice_sum(largs, std::cout);
    return 0;
  }

  subwave::RunConfig cfg = subwave::load_config(config_path);
  if (seed_given) cfg.stability.seed = seed_override;

  if (bands->parsed()) subwave::cmd_bands(cfg, out_dir, std::cout);
  if (modes->parsed()) subwave::cmd_modes(cfg, out_dir, std::cout);
  if (stab->parsed()) subwave::cmd_stability(cfg, out_dir, std::cout);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const subwave::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const subwave::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
