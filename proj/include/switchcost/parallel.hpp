#pragma once

namespace switchcost {

/// Resolves a requested worker count: a positive request is used as is,
/// otherwise SWITCHCOST_THREADS from the environment, otherwise the OpenMP
/// default.
[[nodiscard]] auto resolve_threads(int requested) -> int;

} // namespace switchcost
