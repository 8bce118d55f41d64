#pragma once

namespace asap::cli {

/// Entry point of the asap-align executable. Returns 0 on success, 1 when a
/// pipeline step fails and 2 on usage errors.
int run(int argc, char** argv);

}  // namespace asap::cli
