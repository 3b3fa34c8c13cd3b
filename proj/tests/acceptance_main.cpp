// Runs the twelve acceptance criteria on Fibonacci over {-1,0,1} and prints
// one line per criterion. Exit status 1 when any of them fails.

#include <iostream>

#include "pisotmw/acceptance.hpp"

int main() {
  using namespace pisotmw;
  AcceptanceRunner runner(PisotBasis::fibonacci(), Alphabet(-1, 1));
  bool all = true;
  for (int id : suite_criteria(Suite::All)) {
    CheckResult r = runner.run(id);
    std::cout << r.line() << std::endl;
    all = all && r.passed;
  }
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
