#include "cli.hpp"

int main(int argc, char** argv) { return lozi::cli::run(argc, argv); }
