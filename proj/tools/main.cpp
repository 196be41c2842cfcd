#include "eglb/cli.hpp"

int main(int argc, char** argv) { return eglb::cli::dispatch(argc, argv); }
