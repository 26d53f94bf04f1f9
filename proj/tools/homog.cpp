#include <iostream>

#include "homog/cli.hpp"

int main(int argc, char ** argv)
{
  return homog::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
