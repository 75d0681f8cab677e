#include "sblimp/cli_app.hpp"

int main(int argc, char** argv) { return sblimp::run_cli(argc, argv); }
