#include "fixpoint/cli/commands.hpp"

int main(int argc, char** argv) { return fixpoint::cli::run(argc, argv); }
