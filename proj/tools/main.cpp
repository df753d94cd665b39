#include "tvct_cli.hpp"

int main(int argc, char** argv) { return tvct_cli::run(argc, argv); }
