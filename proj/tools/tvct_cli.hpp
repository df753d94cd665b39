#pragma once

namespace tvct_cli {

/// Entry point behind the tvct binary: dispatches the subcommands
/// (phantom, forward, adjoint, fbp, noise, cap, mask-estimate, reconstruct,
/// rebin, metrics, norm). Returns 0 on success, 1 on usage errors, 2 on
/// runtime errors.
int run(int argc, const char* const* argv);

}  // namespace tvct_cli
