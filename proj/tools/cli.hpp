// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace irscrb {

/// Entry point of the irscrb tool. Returns 0 on success, 1 on a usage
/// error and 2 on a numerical failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace irscrb
