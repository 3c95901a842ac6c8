#include "cnsieve/cli.hpp"

int main(int argc, char** argv) { return cnsieve::cli::run(argc, argv); }
