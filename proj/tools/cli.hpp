#pragma once

namespace oedcli {

/// Parse arguments and execute one subcommand.
/// Returns 0 on success, 1 on usage errors, 2 on numerical failures
/// (with a JSON error record on stderr).
int dispatch(int argc, const char* const* argv);

}  // namespace oedcli
