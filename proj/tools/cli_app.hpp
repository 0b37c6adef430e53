#pragma once

namespace ssti::cli {

/// Entry point of the command-line driver; returns the process exit status.
int run(int argc, const char* const* argv);

}  // namespace ssti::cli
