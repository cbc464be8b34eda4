#include "snsel/cli.hpp"

int main(int argc, char** argv) { return snsel::run_cli(argc, argv); }
