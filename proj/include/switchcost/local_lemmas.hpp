#pragma once

// Exhaustive checks of the local freezing lemmas over every family whose
// members are pairwise within the lemma's cost bound.
//
//   fix      cost <= 2: some anchor character is frozen
//   exists3  cost <= 2: at least n-2 anchor characters are frozen
//   fix2     cost <= 3, |U_R| >= 3: at least n-3 frozen, or semi-frozen
//   pair     cost <= 3 on U_R and U_R' with R, R' in U_Q: for every pair of
//            semi-freezing maps, at most two characters of Q disagree
//   spec     as pair; when exactly two characters q, q' disagree the maps
//            satisfy h_R(q) = h_R'(r'), h_R(r) = h_R'(q'), h_R(q') = w_R'
//            and h_R'(q) = w_R, up to swapping q and q'
//
// For pair and spec the anchors are Q = {0..n-3}, R = Q + {n-2} and
// R' = Q + {n-1}, and every adjacent pair of sets in U_R and U_R' is held
// to the bound. Family combinations without semi-freezing maps on both
// sides count as vacuous.

#include "switchcost/report.hpp"

#include <string_view>

namespace switchcost {

enum class LocalLemma { Fix, Exists3, Fix2, Pair, Spec };

[[nodiscard]] auto to_string(LocalLemma lemma) -> std::string_view;
/// Throws InvalidInputError for unknown names.
[[nodiscard]] auto parse_local_lemma(std::string_view name) -> LocalLemma;
[[nodiscard]] auto is_local_lemma(std::string_view name) -> bool;

/// The Hamming bound the lemma's hypothesis places on adjacent sets.
[[nodiscard]] auto hypothesis_cost(LocalLemma lemma) -> int;

struct LocalLemmaOptions
{
    int threads = 0;
    /// pair and spec only: fix the assignment of R + R' to its sorted order.
    /// Relabelling agents preserves both hypothesis and conclusion.
    bool fix_union_assignment = false;
};

[[nodiscard]] auto check_local_lemma(LocalLemma lemma, int n, int k, const LocalLemmaOptions & options = {})
    -> PropertyReport;
/// Single-threaded reference; same report as check_local_lemma.
[[nodiscard]] auto check_local_lemma_serial(LocalLemma lemma, int n, int k, const LocalLemmaOptions & options = {})
    -> PropertyReport;

} // namespace switchcost
