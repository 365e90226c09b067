#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lowcon/errors.hpp"
#include "lowcon/experiment.hpp"

namespace fs = std::filesystem;

namespace {

// `run` accepts either a config file path or a bundled preset name.
lowcon::ExperimentConfig resolve_config(const std::string& spec) {
  if (fs::exists(spec)) return lowcon::load_config(spec);
  for (const std::string& name : lowcon::preset_names())
    if (name == spec) return lowcon::parse_config(lowcon::preset_text(spec));
  throw lowcon::ConfigError("no such config file or preset: " + spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lowcon: congested-transport experiments"};
  app.require_subcommand(1);

  std::string run_spec, out_override;
  CLI::App* run = app.add_subcommand("run", "run an experiment config or preset");
  run->add_option("config", run_spec, "config file path or preset name")->required();
  run->add_option("--out", out_override, "output directory override");

  std::string cmp_a, cmp_b, metric;
  CLI::App* compare = app.add_subcommand("compare", "compare two report.json files");
  compare->add_option("a", cmp_a, "first report.json")->required();
  compare->add_option("b", cmp_b, "second report.json")->required();
  compare->add_option("--metric", metric, "mean_theta | probe_mass | objective | gap")
      ->required();

  CLI::App* presets = app.add_subcommand("presets", "bundled preset configs");
  CLI::App* plist = presets->add_subcommand("list", "list preset names");
  std::string preset_name;
  CLI::App* pshow = presets->add_subcommand("show", "print a preset config");
  pshow->add_option("name", preset_name, "preset name")->required();
  std::string preset_out;
  CLI::App* pwrite = presets->add_subcommand("write", "write a preset to a file");
  pwrite->add_option("name", preset_name, "preset name")->required();
  pwrite->add_option("--out", preset_out, "target file (default: <name>.cfg)");
  presets->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const lowcon::ExperimentConfig cfg = resolve_config(run_spec);
      const fs::path out_dir = out_override.empty() ? fs::path(cfg.out)
                                                    : fs::path(out_override);
      const int rc = lowcon::run_experiment(cfg, out_dir);
      if (rc == 3)
        std::cerr << "solve did not converge (artifacts written to " << out_dir
                  << ")\n";
      else
        std::cout << "artifacts written to " << out_dir << "\n";
      return rc;
    }
    if (compare->parsed()) {
      const lowcon::CompareResult res =
          lowcon::compare_reports(cmp_a, cmp_b, metric);
      std::cout << res.metric << ": a=" << res.value_a << " b=" << res.value_b
                << " delta=" << res.delta << "\n";
      return 0;
    }
    if (plist->parsed()) {
      for (const std::string& name : lowcon::preset_names())
        std::cout << name << "\n";
      return 0;
    }
    if (pshow->parsed()) {
      std::cout << lowcon::preset_text(preset_name);
      return 0;
    }
    if (pwrite->parsed()) {
      const fs::path target =
          preset_out.empty() ? fs::path(preset_name + ".cfg") : fs::path(preset_out);
      std::ofstream out(target);
      if (!out) throw lowcon::ConfigError("cannot write " + target.string());
      out << lowcon::preset_text(preset_name);
      std::cout << target.string() << "\n";
      return 0;
    }
  } catch (const lowcon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lowcon::IncompatibleReports& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
