#include "voltaic/cli/cli.hpp"

int main(int argc, char** argv) { return voltaic::run_cli(argc, argv); }
