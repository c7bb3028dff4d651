#include "headsim/cli.hpp"

int main(int argc, char** argv) {
  return headsim::cli::main(argc, argv);
}
