#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace afhe {

// Full command-line front end. args excludes the program name. Exit codes:
// 0 success, 1 HISOAI flag / re-engineering trigger / Hisoai regime,
// 2 usage or input errors. Every error prints one machine-parsable JSON
// line on err.
int run_cli(std::vector<std::string> args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace afhe
