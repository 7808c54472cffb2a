#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "helpers.hpp"

#include <cstring>
#include <vector>

namespace testutil {
std::string g_fixtures_dir = "tests/fixtures";
}

int main(int argc, char** argv) {
  std::vector<char*> filtered;
  for (int i = 0; i < argc; ++i) {
    if (i > 0 && std::strncmp(argv[i], "--fixtures=", 11) == 0) {
      testutil::g_fixtures_dir = argv[i] + 11;
      continue;
    }
    filtered.push_back(argv[i]);
  }
  doctest::Context context;
  context.applyCommandLine(static_cast<int>(filtered.size()), filtered.data());
  return context.run();
}
