#include "rig/cli.hpp"

int main(int argc, char** argv) { return rig::cli::run_cli(argc, argv); }
