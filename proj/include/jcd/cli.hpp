#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jcd {

// Exit codes: 0 success, 1 configuration error, 2 numerical failure.
int CliMain(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "-5:15:2" -> {-5, -3, ..., 15}; "0,6,10" -> {0, 6, 10}.
std::vector<double> ParseSnrGrid(const std::string& text);

}  // namespace jcd
