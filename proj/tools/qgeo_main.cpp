#include "qgeo/cli.hpp"

int main(int argc, char** argv) { return qgeo::run_main(argc, argv); }
