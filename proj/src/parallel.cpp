#include "switchcost/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#include <omp.h>

namespace switchcost {

auto resolve_threads(int requested) -> int
{
    if (requested > 0)
        return requested;

    if (const char * env = std::getenv("SWITCHCOST_THREADS")) {
        int value = 0;
        auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
        if (ec == std::errc{} && value > 0)
            return value;
    }

    return omp_get_max_threads();
}

} // namespace switchcost
