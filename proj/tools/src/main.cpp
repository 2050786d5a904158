#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "tog/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"task-oriented grasp evaluation pipeline"};
  app.require_subcommand(1);

  togcli::register_datagen(app);
  togcli::register_train(app);
  togcli::register_eval(app);
  togcli::register_score(app);
  togcli::register_baseline(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const tog::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
