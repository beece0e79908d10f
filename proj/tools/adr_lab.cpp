/// adr-lab <mode-or-config> --config <path> --out-dir <dir> [--threads N] [--override-stability]

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "adrlab/config.hpp"
#include "adrlab/errors.hpp"
#include "adrlab/execute.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Advection-diffusion-reaction runs from a configuration file"};
  std::string target;
  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;
  bool override_stability = false;
  app.add_option("mode-or-config", target,
                 "analytic2d | simulate2d | simulate3d | compare | converge | trajectories, "
                 "or a configuration file")
      ->required();
  app.add_option("--config,-c", config_path, "configuration file");
  app.add_option("--out-dir,-o", out_dir, "output directory (default: output.dir of the config)");
  app.add_option("--threads,-j", threads, "worker threads; never changes output bits")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--override-stability", override_stability,
               "step even when the stability report fails");
  app.set_version_flag("--version", adrlab::kToolVersion);
  CLI11_PARSE(app, argc, argv);

  const std::optional<adrlab::Mode> mode = adrlab::parse_mode(target);
  if (!mode) {
    if (!config_path.empty() && config_path != target) {
      std::cerr << "error: '" << target << "' is not a mode and --config names another file\n";
      return 1;
    }
    config_path = target;
  } else if (config_path.empty()) {
    std::cerr << "error: mode " << target << " needs --config <path>\n";
    return 1;
  }

  adrlab::ExecuteOptions options;
  if (!out_dir.empty()) options.out_dir = out_dir;
  options.threads = threads;
  options.override_stability = override_stability;
  options.out = &std::cout;
  options.err = &std::cerr;

  std::optional<adrlab::RunConfig> config;
  try {
    config = adrlab::parse_config(config_path, mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (options.out_dir) {
      try {
        adrlab::write_failure_manifest(*options.out_dir, e);
      } catch (const std::exception& inner) {
        std::cerr << "error: cannot write manifest: " << inner.what() << "\n";
      }
    }
    return adrlab::exit_code_for(e);
  }
  return adrlab::execute(*config, options);
}
