#include "spheresync/cli.hpp"

int main(int argc, char** argv) { return spheresync::cli::run(argc, argv); }
