#include "superint/cli/cli.hpp"

int main(int argc, char** argv) { return superint::cli::run(argc, argv); }
