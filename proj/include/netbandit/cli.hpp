#pragma once

namespace netbandit {

// Full command-line front end; returns the process exit code.
// Exit codes: 0 ok, 2 config/validation error, 3 parse error, 4 internal.
int cli_main(int argc, const char* const* argv);

}  // namespace netbandit
