#include "cli.hpp"

int main(int argc, char** argv) { return oligecon::cli::run(argc, argv); }
