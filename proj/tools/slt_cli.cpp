#include "slt/cli.hpp"

int main(int argc, char** argv) { return slt::cli::dispatch(argc, argv); }
