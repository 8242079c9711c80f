#include "cli.hpp"

int main(int argc, char** argv) { return tumor_dde::cli::dispatch(argc, argv); }
