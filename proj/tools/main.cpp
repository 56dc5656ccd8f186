#include "cli_app.hpp"

int main(int argc, char** argv) {
  return guesswork::cli::run_cli(argc, argv);
}
