#include <iostream>
#include <string>
#include <vector>

#include "afhe/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 1 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return afhe::run_cli(std::move(args), std::cin, std::cout, std::cerr);
}
