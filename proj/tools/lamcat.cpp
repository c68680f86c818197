#include <iostream>

#include "lamcat/cli.hpp"

int main(int argc, char** argv) { return lamcat::dispatch(argc, argv, std::cout, std::cerr); }
