#include "sagwig/cli_commands.hpp"

int main(int argc, char** argv) { return sagwig::run_cli(argc, argv); }
