#include "switchcost/local_lemmas.hpp"

#include "set_system.hpp"
#include "switchcost/error.hpp"
#include "switchcost/local_structure.hpp"
#include "switchcost/parallel.hpp"

#include <algorithm>
#include <array>

#include <omp.h>

namespace switchcost {

namespace {

    constexpr std::array<std::pair<LocalLemma, std::string_view>, 5> names{ {
        { LocalLemma::Fix, "fix" },
        { LocalLemma::Exists3, "exists3" },
        { LocalLemma::Fix2, "fix2" },
        { LocalLemma::Pair, "pair" },
        { LocalLemma::Spec, "spec" },
    } };

    auto semi_json(const SemiFreezeReport & s) -> nlohmann::json
    {
        auto h = nlohmann::json::object();
        for (const auto & [c, i] : s.h)
            h[std::to_string(c)] = i;
        return { { "h", h }, { "wildcard", s.wildcard } };
    }

    auto freeze_json(const FreezeReport & f) -> nlohmann::json
    {
        auto g = nlohmann::json::object();
        for (const auto & [c, i] : f.g)
            g[std::to_string(c)] = i;
        return g;
    }

    // One family per anchor R = {0..n-2}.
    struct SingleAnchor
    {
        LocalLemma lemma;
        int n;
        int k;
        CharSet anchor;
        detail::SetSystem system;

        SingleAnchor(LocalLemma l, int n_, int k_) :
            lemma(l),
            n(n_),
            k(k_),
            anchor(make_anchor(n_)),
            system(extensions(anchor, k_), hypothesis_cost(l))
        {
        }

        static auto make_anchor(int n) -> CharSet
        {
            CharSet a;
            for (TaskId t = 0; t < n - 1; ++t)
                a.push_back(t);
            return a;
        }

        [[nodiscard]] auto blocks() const -> std::vector<std::vector<std::uint32_t>>
        {
            std::vector<std::vector<std::uint32_t>> out;
            for (std::size_t p = 0; p < system.perm_count(); ++p)
                out.push_back({ static_cast<std::uint32_t>(p) });
            return out;
        }

        void evaluate(const std::vector<std::uint32_t> & choice, PropertyReport & report) const
        {
            std::vector<FamilyMember> members;
            for (std::size_t s = 0; s < choice.size(); ++s)
                members.push_back({ system.set(s).back(), system.assignment(s, choice[s]) });
            LocalFamily family(k, anchor, std::move(members));

            auto config = classify_config(family);
            auto frozen = static_cast<int>(config.freeze.g.size());
            bool ok = true;
            switch (lemma) {
            case LocalLemma::Fix:
                ok = frozen >= 1;
                break;
            case LocalLemma::Exists3:
                ok = frozen >= n - 2;
                break;
            case LocalLemma::Fix2:
                if (family.members().size() < 3) {
                    report.record_vacuous();
                    return;
                }
                ok = config.configuration != Configuration::Neither;
                break;
            default:
                break;
            }
            if (ok) {
                report.record_pass();
                return;
            }
            nlohmann::json witness = { { "family", family_to_json(family) }, { "frozen", freeze_json(config.freeze) },
                { "configuration", std::string(to_string(config.configuration)) } };
            report.record_failure(std::move(witness));
        }
    };

    // Families of R = Q + {n-2} and R' = Q + {n-1}, sharing R + R'.
    struct TwoAnchors
    {
        LocalLemma lemma;
        int n;
        int k;
        bool fix_union;
        CharSet q;
        TaskId r;
        TaskId r2;
        CharSet anchor;
        CharSet anchor2;
        std::vector<std::size_t> members;  // set index of each member of U_R, by extension
        std::vector<std::size_t> members2; // same for U_R'
        detail::SetSystem system;

        TwoAnchors(LocalLemma l, int n_, int k_, bool fix) :
            lemma(l),
            n(n_),
            k(k_),
            fix_union(fix),
            q(make_base(n_)),
            r(n_ - 2),
            r2(n_ - 1),
            anchor(plus(q, r)),
            anchor2(plus(q, r2)),
            system(make_sets(n_, k_), hypothesis_cost(l))
        {
            for (const auto & s : extensions(anchor, k))
                members.push_back(index_of(s));
            for (const auto & s : extensions(anchor2, k))
                members2.push_back(index_of(s));
        }

        static auto make_base(int n) -> CharSet
        {
            CharSet base;
            for (TaskId t = 0; t < n - 2; ++t)
                base.push_back(t);
            return base;
        }

        static auto plus(CharSet set, TaskId x) -> CharSet
        {
            set.insert(std::lower_bound(set.begin(), set.end(), x), x);
            return set;
        }

        static auto make_sets(int n, int k) -> std::vector<CharSet>
        {
            auto base = make_base(n);
            auto a = plus(base, n - 2);
            auto b = plus(base, n - 1);
            auto both = plus(a, n - 1);
            std::vector<CharSet> rest;
            for (const auto & s : extensions(a, k))
                if (s != both)
                    rest.push_back(s);
            for (const auto & s : extensions(b, k))
                if (s != both)
                    rest.push_back(s);
            std::sort(rest.begin(), rest.end());
            rest.insert(rest.begin(), both);
            return rest;
        }

        [[nodiscard]] auto index_of(const CharSet & s) const -> std::size_t
        {
            for (std::size_t i = 0; i < system.set_count(); ++i)
                if (system.set(i) == s)
                    return i;
            throw std::logic_error("set missing from the two-anchor system");
        }

        [[nodiscard]] auto blocks() const -> std::vector<std::vector<std::uint32_t>>
        {
            std::vector<std::vector<std::uint32_t>> out;
            for (std::size_t p = 0; p < system.perm_count(); ++p) {
                if (fix_union)
                    out.push_back({ 0, static_cast<std::uint32_t>(p) });
                else
                    out.push_back({ static_cast<std::uint32_t>(p) });
            }
            return out;
        }

        [[nodiscard]] auto family(const CharSet & a, const std::vector<std::size_t> & sets,
            const std::vector<std::uint32_t> & choice) const -> LocalFamily
        {
            std::vector<FamilyMember> out;
            for (auto s : sets) {
                const auto & set = system.set(s);
                auto x = *std::find_if(
                    set.begin(), set.end(), [&](TaskId t) { return ! std::binary_search(a.begin(), a.end(), t); });
                out.push_back({ x, system.assignment(s, choice[s]) });
            }
            return LocalFamily(k, a, std::move(out));
        }

        [[nodiscard]] auto spec_holds(const SemiFreezeReport & h1, const SemiFreezeReport & h2, TaskId a, TaskId b) const
            -> bool
        {
            return h1.h.at(a) == h2.h.at(r2) && h1.h.at(r) == h2.h.at(b) && h1.h.at(b) == h2.wildcard
                && h2.h.at(a) == h1.wildcard;
        }

        void evaluate(const std::vector<std::uint32_t> & choice, PropertyReport & report) const
        {
            auto f1 = family(anchor, members, choice);
            auto f2 = family(anchor2, members2, choice);
            auto s1 = all_semi_freezes(f1);
            auto s2 = all_semi_freezes(f2);
            if (s1.empty() || s2.empty()) {
                report.record_vacuous();
                return;
            }
            for (const auto & h1 : s1)
                for (const auto & h2 : s2) {
                    std::vector<TaskId> differ;
                    for (auto c : q)
                        if (h1.h.at(c) != h2.h.at(c))
                            differ.push_back(c);
                    bool ok = true;
                    if (lemma == LocalLemma::Pair)
                        ok = differ.size() <= 2;
                    else if (differ.size() < 2) {
                        report.record_vacuous();
                        continue;
                    }
                    else
                        ok = differ.size() == 2
                            && (spec_holds(h1, h2, differ[0], differ[1]) || spec_holds(h1, h2, differ[1], differ[0]));
                    if (ok) {
                        report.record_pass();
                        continue;
                    }
                    report.record_failure({ { "families", { family_to_json(f1), family_to_json(f2) } },
                        { "semi_freezes", { semi_json(h1), semi_json(h2) } }, { "differing", differ } });
                }
        }
    };

    void check_arguments(LocalLemma lemma, int n, int k)
    {
        if (n < 2 || k < n)
            throw InvalidInstanceError(
                "local lemmas need 2 <= n <= k, got n=" + std::to_string(n) + " k=" + std::to_string(k));
        if ((lemma == LocalLemma::Pair || lemma == LocalLemma::Spec) && n < 3)
            throw InvalidInstanceError("pair and spec need n >= 3");
    }

    template <class Checker>
    auto run(const Checker & checker, LocalLemma lemma, int n, int k, int threads) -> PropertyReport
    {
        auto blocks = checker.blocks();
        std::vector<PropertyReport> parts(blocks.size());
        auto count = static_cast<long>(blocks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (long b = 0; b < count; ++b) {
            auto & part = parts[static_cast<std::size_t>(b)];
            checker.system.visit_prefix(blocks[static_cast<std::size_t>(b)],
                [&](const std::vector<std::uint32_t> & choice) { checker.evaluate(choice, part); });
        }
        PropertyReport report;
        report.property = std::string(to_string(lemma));
        report.n = n;
        report.k = k;
        for (const auto & part : parts)
            report.merge(part);
        return report;
    }

    auto dispatch(LocalLemma lemma, int n, int k, const LocalLemmaOptions & options, int threads) -> PropertyReport
    {
        check_arguments(lemma, n, k);
        if (lemma == LocalLemma::Pair || lemma == LocalLemma::Spec)
            return run(TwoAnchors(lemma, n, k, options.fix_union_assignment), lemma, n, k, threads);
        return run(SingleAnchor(lemma, n, k), lemma, n, k, threads);
    }
}

auto to_string(LocalLemma lemma) -> std::string_view
{
    for (const auto & [l, name] : names)
        if (l == lemma)
            return name;
    return "unknown";
}

auto is_local_lemma(std::string_view name) -> bool
{
    return std::any_of(names.begin(), names.end(), [&](const auto & e) { return e.second == name; });
}

auto parse_local_lemma(std::string_view name) -> LocalLemma
{
    for (const auto & [l, text] : names)
        if (text == name)
            return l;
    throw InvalidInputError("unknown local lemma '" + std::string(name) + "'");
}

auto hypothesis_cost(LocalLemma lemma) -> int
{
    return lemma == LocalLemma::Fix || lemma == LocalLemma::Exists3 ? 2 : 3;
}

auto check_local_lemma(LocalLemma lemma, int n, int k, const LocalLemmaOptions & options) -> PropertyReport
{
    return dispatch(lemma, n, k, options, resolve_threads(options.threads));
}

auto check_local_lemma_serial(LocalLemma lemma, int n, int k, const LocalLemmaOptions & options) -> PropertyReport
{
    return dispatch(lemma, n, k, options, 1);
}

} // namespace switchcost
