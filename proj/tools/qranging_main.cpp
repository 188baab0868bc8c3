#include "qranging/sweep.hpp"

int main(int argc, char** argv) { return qranging::cli_main(argc, argv); }
