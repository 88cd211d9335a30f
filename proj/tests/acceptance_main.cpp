#include <iostream>

#include "acceptance.hpp"

int main() {
  return safecomp::acceptance::run_all(std::cout) ? 0 : 1;
}
