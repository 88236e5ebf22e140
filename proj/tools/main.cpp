#include "npdrift/cli.hpp"

int main(int argc, char** argv) { return npdrift::run_cli(argc, argv); }
