#include "trigen/cli.hpp"

int main(int argc, char** argv) { return trigen::run_cli(argc, argv); }
