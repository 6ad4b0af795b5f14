#pragma once

// Command-line front end.
//
// Exit codes: 0 success (a Feasible verdict included), 1 proven Infeasible or
// a property violation, 2 usage or input error, 3 capacity, domain or
// precondition error.

#include <iosfwd>
#include <string>
#include <vector>

namespace switchcost {

inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_limits = 3;

auto dispatch(int argc, const char * const * argv, std::ostream & out, std::ostream & err) -> int;

/// `args` excludes the program name.
auto dispatch(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;

} // namespace switchcost
