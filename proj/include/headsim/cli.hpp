#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace headsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitIo = 3;

/// `args` excludes the program name. Failures print one line
/// `error kind=<config|usage|io|runtime> ... msg="..."` to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace headsim::cli
