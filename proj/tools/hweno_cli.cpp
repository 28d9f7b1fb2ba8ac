#include "hweno/cli.hpp"

int main(int argc, char** argv) { return hweno::cli_main(argc, argv); }
