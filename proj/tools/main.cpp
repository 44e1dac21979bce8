#include "mixrip/cli.hpp"

int main(int argc, char** argv) { return mixrip::run_cli(argc, argv); }
