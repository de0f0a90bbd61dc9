#include "pmpg/cli.hpp"

int main(int argc, char** argv) { return pmpg::cli::main_entry(argc, argv); }
