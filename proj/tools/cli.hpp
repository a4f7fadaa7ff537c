// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shapemetric {

/// Exit codes: 0 success, 1 partial (some entries failed or nothing to
/// aggregate), 2 fatal or usage error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace shapemetric
