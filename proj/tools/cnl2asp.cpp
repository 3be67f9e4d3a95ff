#include "cnl2asp/cli.h"

int main(int argc, char** argv) { return cnl2asp::cli::run_cli(argc, argv); }
