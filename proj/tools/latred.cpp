#include "latred/cli.hpp"

int main(int argc, char** argv) { return latred::run_cli(argc, argv); }
