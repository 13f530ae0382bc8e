#include "pslab/cli.hpp"

int main(int argc, char** argv) { return pslab::run_cli(argc, argv); }
