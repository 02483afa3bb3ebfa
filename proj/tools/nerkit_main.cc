#include "nerkit/cli.h"

int main(int argc, char** argv) { return nerkit::cli::run(argc, argv); }
