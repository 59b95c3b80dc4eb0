// SPDX-License-Identifier: Apache-2.0
#include <string>
#include <vector>

#include "chain_escape/cli.hpp"

int main(int argc, char** argv)
{
    return chain_escape::cli::main(std::vector<std::string>(argv + 1, argv + argc));
}
