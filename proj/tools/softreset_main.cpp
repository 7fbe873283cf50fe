#include "softreset/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIntegration = 3;

std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : csv) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft-reset control experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, param, values_csv;
  std::string seed_str;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed_str, "random seed (overrides config)");
    sub->add_flag("--quiet", quiet, "suppress the summary on stdout");
  };

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_common(run);

  CLI::App* sw = app.add_subcommand("sweep", "run one experiment per value");
  add_common(sw);
  sw->add_option("--param", param, "config key to sweep")->required();
  sw->add_option("--values", values_csv, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    softreset::Config raw = softreset::Config::parse_file(config_path);
    if (!out_dir.empty()) raw.set("out", out_dir);
    if (!seed_str.empty()) raw.set("seed", seed_str);

    if (app.got_subcommand(run)) {
      softreset::ExperimentConfig cfg =
          softreset::ExperimentConfig::from_config(raw);
      const softreset::RunResult result = softreset::run_experiment(cfg);
      if (!quiet) std::cout << result.summary;
      return result.exit_code == 0 ? kExitOk : kExitIntegration;
    }

    const std::string sweep_out = raw.get_string("out", "");
    const softreset::SweepResult result = softreset::sweep(
        raw, param, split_values(values_csv), sweep_out);
    if (!quiet) {
      for (std::size_t i = 0; i < result.runs.size(); ++i) {
        std::cout << "--- " << param << " run " << i + 1 << " ---\n"
                  << result.runs[i].summary;
      }
    }
    return result.exit_code == 0 ? kExitOk : kExitIntegration;
  } catch (const softreset::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIntegration;
  }
}
