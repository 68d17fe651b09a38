#include "relaxnn/harness.hpp"

int main(int argc, char** argv) { return relaxnn::run_cli(argc, argv); }
