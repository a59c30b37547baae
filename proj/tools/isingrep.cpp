#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "isingrep/experiment.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw isingrep::ConfigError("cannot open config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw isingrep::ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo experiments on graphical representations of the Ising model"};
  app.require_subcommand(1);

  std::string config_path, output_path;
  for (const char* name : {"enumerate-check", "torus-scan", "mixing-scan", "sample"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output_path, "Output file (default: the config's \"output\", else stdout)");
  }
  app.add_subcommand("schema", "Print the experiment configuration schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "schema") {
    std::cout << isingrep::experiment_schema().dump(2) << '\n';
    return 0;
  }

  try {
    const nlohmann::json config = load_config(config_path);
    const auto result = isingrep::run_command(isingrep::command_from_string(chosen->get_name()), config);
    std::string target = output_path;
    if (target.empty() && config.contains("output")) target = config.at("output").get<std::string>();
    if (target.empty() || target == "-") {
      std::cout << result.output;
    } else {
      std::ofstream out(target, std::ios::binary);
      out << result.output;
      if (!out) {
        std::cerr << "error: cannot write " << target << '\n';
        return 2;
      }
    }
    if (result.exit_code != 0) std::cerr << chosen->get_name() << ": at least one check failed\n";
    return result.exit_code;
  } catch (const isingrep::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const isingrep::CapError& e) {
    std::cerr << "size cap exceeded: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
