#include "vch/cli.hpp"

int main(int argc, char** argv) { return vch::run_cli(argc, argv); }
