#include "hallway/cli.hpp"

int main(int argc, char** argv) { return hallway::cli::run_main(argc, argv); }
