#include "cli.hpp"

int main(int argc, char** argv) { return catqkd::cli::run(argc, argv); }
