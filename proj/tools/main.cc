#include <iostream>

#include "cli.h"

int main(int argc, char **argv) {
  return lcq::RunCli(argc, argv, std::cout, std::cerr);
}
