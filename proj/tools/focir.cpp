#include "focir/cli.hpp"

int main(int argc, char** argv) { return focir::cli::run(argc, argv); }
