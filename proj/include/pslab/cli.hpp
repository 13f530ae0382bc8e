#pragma once

namespace pslab {

/// Entry point of the `pslab` command-line tool. Exit codes: 0 success,
/// 1 failed verification, 2 configuration error, 3 numerical or domain error.
int run_cli(int argc, char** argv);

}  // namespace pslab
