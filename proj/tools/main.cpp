#include "fluxquant/cli.hpp"

int main(int argc, char** argv) { return fluxquant::run_cli(argc, argv); }
