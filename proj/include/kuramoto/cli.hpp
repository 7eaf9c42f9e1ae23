#pragma once

#include <iostream>

namespace kuramoto {

// Exit codes: 0 ok or certified, 1 input/I-O error, 2 not certified, 3 numeric abort.
int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

} // namespace kuramoto
