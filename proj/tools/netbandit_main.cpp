#include "netbandit/cli.hpp"

int main(int argc, char** argv) { return netbandit::cli_main(argc, argv); }
