#pragma once

namespace eglb::cli {

// Full command-line entry point (run / compare / gen / verify-bound).
// Exit codes: 0 success, 1 check or data failure, 2 usage error.
int dispatch(int argc, const char* const* argv);

}  // namespace eglb::cli
