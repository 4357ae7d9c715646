#include <string>
#include <vector>

#include "loopeq/cli.hpp"

int main(int argc, char** argv) { return loopeq::run_command(std::vector<std::string>(argv + 1, argv + argc)); }
