// degtest: command-line front end. Flags are mapped onto an experiment
// config (optionally layered over --config FILE) and handed to cli::run.

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "degtest/cli.hpp"

namespace {

using degtest::Json;
namespace cli = degtest::cli;

std::string flag_for(const std::string& key) {
  static const std::map<std::string, std::string> constants{
      {"c", "--c"},           {"c_K", "--c-k"},         {"gamma", "--gamma"},    {"m1_multiplier", "--m1-mult"},
      {"m2_multiplier", "--m2-mult"}, {"m_multiplier", "--m-mult"}, {"c_amp", "--c-amp"}};
  if (const auto it = constants.find(key); it != constants.end()) return it->second;
  std::string flag = "--" + key;
  for (char& ch : flag)
    if (ch == '_') ch = '-';
  return flag;
}

struct Pending {
  const cli::Field* field;
  bool constant;
  std::string value;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes-net degree testing and learning experiments"};
  app.require_subcommand(1);

  std::map<std::string, std::vector<Pending>> pending;
  std::map<std::string, std::optional<std::uint64_t>> seeds;
  std::map<std::string, std::string> outs;
  std::map<std::string, std::string> config_files;

  for (const auto& name : cli::commands()) {
    static const std::map<std::string, std::string> about{
        {"sample", "draw samples from a model"},
        {"learn", "near-proper learning on a given dag"},
        {"support", "support identification on a given dag"},
        {"test", "test a graph (or every dag of a degree bound); exit 0 accept, 1 reject"},
        {"minimax", "learner risk on random hard instances"},
        {"risk", "add-K chi-square risk on a named target"},
        {"distances", "exact divergences between two models"},
        {"calibrate", "run calibration protocols and update the calibration file"},
        {"enumerate-dags", "list dags with bounded in-degree"},
    };
    auto* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : "");
    auto& slots = pending[name];
    const auto& fields = cli::command_fields(name);
    const auto& constants = cli::constant_fields();
    slots.reserve(fields.size() + constants.size());
    for (const auto& f : fields) {
      slots.push_back({&f, false, {}});
      sub->add_option(flag_for(f.name), slots.back().value, f.help);
    }
    for (const auto& f : constants) {
      slots.push_back({&f, true, {}});
      sub->add_option(flag_for(f.name), slots.back().value, f.help);
    }
    sub->add_option("--seed", seeds[name], "random seed");
    sub->add_option("--out", outs[name], "output directory");
    sub->add_option("--config", config_files[name], "JSON config file; flags override it");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << cli::error_json("usage", e.what()).dump() << '\n';
    return cli::kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Json config = Json::object();
  try {
    if (!config_files[command].empty()) config = degtest::read_json(config_files[command]);
    if (!config.is_object()) throw cli::ConfigError("config file must hold a JSON object");
    if (config.contains("command") && config["command"] != command)
      throw cli::ConfigError("config file is for command " + config["command"].dump());
    config["command"] = command;
    if (seeds[command]) config["seed"] = *seeds[command];
    if (!outs[command].empty()) config["output_dir"] = outs[command];
    for (const auto& p : pending[command]) {
      if (p.value.empty()) continue;
      Json& block = p.constant ? config["constants"] : config[command];
      block[p.field->name] = cli::parse_field_value(*p.field, p.value);
    }
  } catch (const std::exception& e) {
    std::cout << cli::error_json("config", e.what()).dump() << '\n';
    return cli::kExitError;
  }
  return cli::run_json(config, std::cout);
}
