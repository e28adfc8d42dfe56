#include "drccp/cli.hpp"

int main(int argc, char** argv) { return drccp::cli::cli_dispatch(argc, argv); }
