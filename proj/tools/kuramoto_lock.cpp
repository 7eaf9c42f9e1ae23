#include "kuramoto/cli.hpp"

int main(int argc, char** argv) { return kuramoto::run_cli(argc, argv); }
