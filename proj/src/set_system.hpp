#pragma once

// Backtracking over one permutation per character set, with a Hamming limit
// on every pair of sets whose symmetric difference has size two. Used by the
// local-family enumerator and the two-anchor lemma checks.

#include "switchcost/local_structure.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace switchcost::detail {

class SetSystem
{
public:
    using Word = std::uint64_t;

    SetSystem(std::vector<CharSet> sets, int max_cost);

    [[nodiscard]] auto set_count() const -> std::size_t { return sets_.size(); }
    [[nodiscard]] auto set(std::size_t s) const -> const CharSet & { return sets_[s]; }
    [[nodiscard]] auto n() const -> int { return n_; }
    [[nodiscard]] auto perm_count() const -> std::size_t { return perm_count_; }
    /// Permutation p of set s: n tasks, agent order.
    [[nodiscard]] auto perm(std::size_t s, std::size_t p) const -> const TaskId *
    {
        return &perms_[(s * perm_count_ + p) * static_cast<std::size_t>(n_)];
    }
    [[nodiscard]] auto assignment(std::size_t s, std::size_t p) const -> Assignment
    {
        const auto * t = perm(s, p);
        return Assignment(std::vector<TaskId>(t, t + n_));
    }

    /// Calls visit(choice) for every consistent choice that starts with
    /// `prefix`, in lexicographic order of the choice vector.
    template <class Visit>
    void visit_prefix(const std::vector<std::uint32_t> & prefix, Visit && visit) const
    {
        if (sets_.empty() || prefix.size() > sets_.size())
            return;
        std::vector<std::vector<Word>> dom(sets_.size() + 1, std::vector<Word>(sets_.size() * words_, 0));
        for (std::size_t s = 0; s < sets_.size(); ++s)
            for (std::size_t p = 0; p < perm_count_; ++p)
                dom[0][s * words_ + p / 64] |= Word{ 1 } << (p % 64);
        std::vector<std::uint32_t> choice(sets_.size(), 0);
        for (std::size_t s = 0; s < prefix.size(); ++s) {
            auto p = prefix[s];
            if (p >= perm_count_ || ! (dom[s][s * words_ + p / 64] >> (p % 64) & 1))
                return;
            if (! narrow(dom[s], dom[s + 1], s, p))
                return;
            choice[s] = p;
        }
        descend(prefix.size(), dom, choice, visit);
    }

private:
    auto narrow(const std::vector<Word> & from, std::vector<Word> & to, std::size_t s, std::size_t p) const -> bool
    {
        to = from;
        for (auto other : later_[s]) {
            const Word * row = &compat_[((s * sets_.size() + other) * perm_count_ + p) * words_];
            Word * target = &to[other * words_];
            Word any = 0;
            for (std::size_t w = 0; w < words_; ++w)
                any |= (target[w] &= row[w]);
            if (! any)
                return false;
        }
        return true;
    }

    template <class Visit>
    void descend(std::size_t s, std::vector<std::vector<Word>> & dom, std::vector<std::uint32_t> & choice,
        Visit & visit) const
    {
        if (s == sets_.size()) {
            visit(choice);
            return;
        }
        for (std::size_t w = 0; w < words_; ++w)
            for (Word bits = dom[s][s * words_ + w]; bits; bits &= bits - 1) {
                auto p = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                if (! narrow(dom[s], dom[s + 1], s, p))
                    continue;
                choice[s] = static_cast<std::uint32_t>(p);
                descend(s + 1, dom, choice, visit);
            }
    }

    std::vector<CharSet> sets_;
    int n_ = 0;
    std::size_t perm_count_ = 0;
    std::size_t words_ = 0;
    std::vector<TaskId> perms_;
    std::vector<std::vector<std::size_t>> later_;
    std::vector<Word> compat_; // [s][other][p] rows of words_, only for adjacent s < other
};

} // namespace switchcost::detail
