#include "wulff/cli.hpp"

int main(int argc, char** argv) { return wulff::cli::run(argc, argv); }
