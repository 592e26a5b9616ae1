#include <cstdlib>
#include <iostream>
#include <vector>

#include "tfe10/acceptance.hpp"

// Runs the numbered acceptance criteria (all of them without arguments) and
// prints one pass/fail line each. Exit status 0 iff every selected criterion passed.
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || id < 1 || id > tfe10::acceptance::criterion_count) {
      std::cerr << "usage: acceptance [criterion 1.." << tfe10::acceptance::criterion_count << "]...\n";
      return 2;
    }
    ids.push_back(static_cast<int>(id));
  }
  const auto checks = tfe10::acceptance::run(ids, &std::cout);
  int passed = 0;
  for (const auto& c : checks) passed += c.passed;
  std::cout << passed << "/" << checks.size() << " criteria passed\n";
  return passed == static_cast<int>(checks.size()) ? 0 : 1;
}
