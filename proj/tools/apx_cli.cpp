#include "apx/cli.hpp"

int main(int argc, char** argv) {
  return apx::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
