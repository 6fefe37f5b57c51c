// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "emur/cli.hpp"

int main(int argc, char **argv) {
  return emur::run_cli(argc, argv, std::cout, std::cerr);
}
