#include "sixvertex/cli.hpp"

int main(int argc, char** argv) { return sixvertex::cli::run_cli(argc, argv); }
