#include "qif/cli.hpp"

int main(int argc, char** argv) { return qif::cli::run(argc, argv); }
