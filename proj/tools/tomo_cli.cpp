#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "tomo/errors.hpp"
#include "tomo/experiment.hpp"

namespace {

struct CommandArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  CLI::App* app = nullptr;
};

/// Every config key becomes a flag of the same name; a few get short
/// aliases. Overrides are applied on top of the config file, in key order.
void attach_config_flags(CLI::App* cmd, CommandArgs& args) {
  args.app = cmd;
  cmd->add_option("--config", args.config_path, "Config file (key = value)");
  static const std::map<std::string, std::string> aliases = {
      {"dose_fraction", ",--dose"},
      {"output_dir", ",--out"},
      {"max_iterations", ",--iterations"},
      {"learning_rate", ",--lr"},
  };
  for (const std::string& key : tomo::ExperimentConfig::keys()) {
    std::string names = "--" + key;
    const auto alias = aliases.find(key);
    if (alias != aliases.end()) names += alias->second;
    cmd->add_option(names, args.overrides[key], "Config key " + key);
  }
}

tomo::ExperimentConfig resolve_config(const CommandArgs& args) {
  tomo::ExperimentConfig cfg;
  if (!args.config_path.empty()) cfg = tomo::parse_config_file(args.config_path);
  for (const auto& [key, value] : args.overrides) {
    if (args.app->count("--" + key) > 0) cfg.set(key, value);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D parallel-beam tomography: simulation, sinogram "
               "inpainting, and evaluation"};
  app.require_subcommand(1);

  CommandArgs sim_args, inpaint_args, eval_args;
  std::string method;
  bool mismatched_adjoint = false;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Write ground truth and per-seed measured sinograms");
  attach_config_flags(sim, sim_args);

  CLI::App* inpaint = app.add_subcommand(
      "inpaint", "Fill missing angles and reconstruct");
  attach_config_flags(inpaint, inpaint_args);
  inpaint->add_option("--method", method,
                      "nearest, linear, or optimize (default: all)");

  CLI::App* eval = app.add_subcommand(
      "evaluate", "Score reconstructions against the ground truth");
  attach_config_flags(eval, eval_args);

  CLI::App* selftest = app.add_subcommand(
      "selftest", "Run built-in numerical property checks");
  selftest->add_flag("--debug-mismatched-adjoint", mismatched_adjoint,
                     "Swap in a wrong backprojector; the adjoint check "
                     "must then fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed()) {
      tomo::run_simulate(resolve_config(sim_args));
    } else if (inpaint->parsed()) {
      tomo::run_inpaint(resolve_config(inpaint_args), method);
    } else if (eval->parsed()) {
      tomo::run_evaluate(resolve_config(eval_args));
    } else if (selftest->parsed()) {
      if (tomo::run_selftest(mismatched_adjoint, std::cout) > 0) return 2;
    }
  } catch (const tomo::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const tomo::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const tomo::MissingInputError& e) {
    std::cerr << "missing input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
