#include "epcrit/cli.hpp"

int main(int argc, char** argv) { return epcrit::run_cli(argc, argv); }
