#include "cwip/cli.hpp"

int main(int argc, char** argv) { return cwip::cli::run(argc, argv); }
