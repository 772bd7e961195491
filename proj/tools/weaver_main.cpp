#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "weaver/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return weaver::cli::run(args, std::cout, std::cerr, std::getenv(weaver::cli::kCapEnvVar));
}
