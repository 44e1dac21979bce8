#pragma once

namespace mixrip {

// Command-line entry point; returns 0 on success, 1 on assertion failure,
// 2 on configuration error.
int run_cli(int argc, char** argv);

} // namespace mixrip
