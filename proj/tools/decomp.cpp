#include "decomp/cli.hpp"

int main(int argc, char** argv) { return decomp::cli::main(argc, argv); }
