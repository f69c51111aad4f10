#include <cstdio>
#include <string>
#include <vector>

#include "graphk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  graphk::CommandResult r = graphk::run(args);
  std::fputs(r.output.c_str(), r.code == 2 ? stderr : stdout);
  return r.code;
}
