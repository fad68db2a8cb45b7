#include "qew/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <memory>
#include <string>

namespace {

using qew::cli::Format;
using qew::cli::RunConfig;
using qew::cli::Subcommand;

struct Bound {
  Subcommand subcommand;
  CLI::App* app;
  std::map<std::string, std::string> values;
};

void add_common(CLI::App* app, std::string& output, std::string& format) {
  app->add_option("-o,--output", output, "output file (default: stdout)");
  app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void bind_schema(Bound& b) {
  for (const auto& spec : qew::cli::schema(b.subcommand)) {
    b.app->add_option("--" + spec.key, b.values[spec.key], spec.help + " [default: " + spec.default_value + "]");
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-electron / cavity-photon amplitude calculator"};
  app.require_subcommand(1);
  std::string output;
  std::string format = "csv";

  std::vector<std::unique_ptr<Bound>> bound;
  auto attach = [&](CLI::App* parent, const std::string& name, Subcommand s, const std::string& help) {
    auto b = std::make_unique<Bound>(Bound{s, parent->add_subcommand(name, help), {}});
    bind_schema(*b);
    add_common(b->app, output, format);
    bound.push_back(std::move(b));
  };
  attach(&app, "eels", Subcommand::eels, "electron loss into an empty cavity");
  attach(&app, "pinem", Subcommand::pinem, "electron and coherent cavity state");
  attach(&app, "two-electron", Subcommand::two_electron, "second electron after the first one's losses");
  attach(&app, "classical-limit", Subcommand::classical_limit, "exact spectrum against Bessel sidebands");
  attach(&app, "oracle-check", Subcommand::oracle_check, "closed forms against the matrix exponential");
  attach(&app, "kinematics", Subcommand::kinematics, "relativistic electron quantities");
  attach(&app, "fiber-solve", Subcommand::fiber_solve, "HE11 mode and coupling for one diameter");
  attach(&app, "fiber-sweep", Subcommand::fiber_sweep, "HE11 properties over a diameter range");
  CLI::App* fiber = app.add_subcommand("fiber", "fiber solve | fiber sweep");
  fiber->require_subcommand(1);
  attach(fiber, "solve", Subcommand::fiber_solve, "HE11 mode and coupling for one diameter");
  attach(fiber, "sweep", Subcommand::fiber_sweep, "HE11 properties over a diameter range");

  std::string preset_name;
  CLI::App* preset = app.add_subcommand("preset", "run a named figure preset");
  preset->add_option("name", preset_name, "preset name")->required()->check(CLI::IsMember(qew::cli::preset_names()));
  add_common(preset, output, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  RunConfig config;
  if (preset->parsed()) {
    config = qew::cli::preset(preset_name);
  } else {
    for (const auto& b : bound) {
      if (!b->app->parsed()) continue;
      config.subcommand = b->subcommand;
      for (const auto& [key, value] : b->values) {
        if (b->app->count("--" + key) > 0) config.parameters[key] = value;
      }
    }
  }
  config.output_path = output;
  config.format = format == "json" ? Format::json : Format::csv;
  return qew::cli::run(config, std::cout, std::cerr).exit_code;
}
