#include "tfe10/cli.hpp"

int main(int argc, char** argv) { return tfe10::cli::main(argc, argv); }
