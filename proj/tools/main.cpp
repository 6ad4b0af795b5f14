#include "switchcost/cli.hpp"

#include <iostream>

int main(int argc, char ** argv) { return switchcost::dispatch(argc, argv, std::cout, std::cerr); }
