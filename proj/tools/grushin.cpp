#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "grushin/cli.hpp"
#include "grushin/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for the Grushin operator G = -Delta - |x|^2 d_t^2"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "grushin 1.0.0");

  std::string config_path;
  std::string output_dir;
  std::string probe_type;
  std::string apply_kind;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--output", output_dir, "output directory (overrides output.dir)");
    return sub;
  };
  add("transform", "forward transform of the input with round-trip and Parseval checks");
  add("apply", "apply the operator pipeline or a g-function to the input")
      ->add_option("kind", apply_kind, "pipeline | gfunc (overrides apply.kind)")
      ->check(CLI::IsMember({"pipeline", "gfunc"}));
  add("probe", "empirical norm probes")
      ->add_option("type", probe_type, "norm | rbound | maximal | hormander | equivalence (overrides probe.type)")
      ->check(CLI::IsMember({"norm", "rbound", "maximal", "hormander", "equivalence"}));
  add("selftest", "run the invariant suite; exit 4 on any failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : grushin::kExitConfig;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    grushin::RunConfig config = grushin::load_config(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!probe_type.empty()) config.probe.type = probe_type;
    if (!apply_kind.empty()) config.apply.kind = apply_kind;
    return grushin::run_pipeline(sub, config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "grushin " << sub << ": " << e.what() << "\n";
    return grushin::exit_code_for(e);
  }
}
