#include <vector>

#include "tollane/commands.hpp"

int main(int argc, char** argv) {
  return tollane::run_command({argv + 1, argv + argc});
}
