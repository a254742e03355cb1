#include "bisect/cli.hpp"

int main(int argc, char** argv) { return bisect::run_cli(argc, argv); }
