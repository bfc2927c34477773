#include "jetflow/cli.hpp"

int main(int argc, char** argv) { return jetflow::cli::run(argc, argv); }
