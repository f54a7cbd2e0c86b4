#include "emograph/cli.hpp"

int main(int argc, char** argv) { return emograph::run_cli(argc, argv); }
