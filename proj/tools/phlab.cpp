#include "phlab/cli.hpp"

int main(int argc, char** argv) { return phlab::cli::run(argc, argv); }
