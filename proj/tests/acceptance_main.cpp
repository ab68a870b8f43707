#include <iostream>
#include <string>

#include "repwalk/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string selector = argc > 1 ? argv[1] : "all";
  return repwalk::run_acceptance(selector, std::cout);
}
