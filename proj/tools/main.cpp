#include "cli.hpp"

int main(int argc, char** argv) { return davies::cli::run(argc, argv); }
