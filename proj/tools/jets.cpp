#include <jets/cli.hpp>

int main(int argc, char** argv) { return jets::cli::run(argc, argv); }
