#include "hmmlyap/cli.hpp"

int main(int argc, char** argv) { return hmmlyap::run_cli(argc, argv); }
