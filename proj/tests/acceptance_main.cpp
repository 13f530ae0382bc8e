#include <iostream>

#include "pslab/acceptance.hpp"

int main() {
  const auto results = pslab::run_acceptance({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, &std::cerr);
  return pslab::print_acceptance_table(results, std::cout) ? 0 : 1;
}
