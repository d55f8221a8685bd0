#include "mmtool/cli.hpp"

int main(int argc, char** argv) { return mmtool::cli_main(argc, argv); }
