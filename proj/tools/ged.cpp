#include <vector>

#include "ged/cli.hpp"

int main(int argc, char** argv) {
  return ged::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
