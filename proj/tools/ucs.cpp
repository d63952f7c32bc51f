#include "ucs/cli.hpp"

int main(int argc, char** argv) { return ucs::cli::run(argc, argv); }
