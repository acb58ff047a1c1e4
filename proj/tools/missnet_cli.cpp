#include "missnet/io.hpp"

int main(int argc, char** argv) { return missnet::run_cli(argc, argv); }
