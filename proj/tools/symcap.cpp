// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "symcap/cli.hpp"

int main(int argc, char** argv) { return symcap::run_cli(argc, argv, std::cout, std::cerr); }
