#include "cli/app.hpp"

int main(int argc, char** argv) { return oneclass::cli::run(argc, argv); }
