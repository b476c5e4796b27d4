#include "seqtc_cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return seqtc::cli::run({argv + 1, argv + argc}, std::cout); }
