#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "patchtooth/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"patchtooth: patch scheme experiments for heterogeneous lattice diffusion"};
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> task;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--task", task, "eigen | simulate | homogenize | sweep | check (overrides task)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : patchtooth::kExitValidation;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read " << config_path << '\n';
    return patchtooth::kExitValidation;
  }
  nlohmann::json document;
  try {
    in >> document;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << '\n';
    return patchtooth::kExitValidation;
  }
  return patchtooth::run_document(std::move(document), out_dir, task, std::cout, std::cerr);
}
