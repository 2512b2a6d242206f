#include <catch2/catch_amalgamated.hpp>

#include "hsc/relational.hpp"
#include "hsc/testgen.hpp"
#include "test_util.hpp"

using namespace hsc;
using testutil::keys;
using testutil::tiny_gap_plant;
using testutil::tiny_gap_spec;

namespace {

ProjectionContext gap_ctx() { return ProjectionContext::from(tiny_gap_plant().alphabet); }

/// Prefix closure of {ab, cb} over {a,b,c} with high-level {a,b} and
/// observable {b,c}: the small plant whose abstraction pairs (ab, b) have no
/// observation-equivalent lift.
Automaton oc_violating_plant() {
    Alphabet sigma = make_alphabet({"a", "b", "c"}, {"a", "b", "c"}, {"b", "c"}, {"a", "b"});
    return make_automaton(sigma, {"i0", "ia", "iab", "ic", "icb"}, "i0",
                          {"i0", "ia", "iab", "ic", "icb"},
                          {{"i0", "a", "ia"},
                           {"ia", "b", "iab"},
                           {"i0", "c", "ic"},
                           {"ic", "b", "icb"}});
}

/// Prefix closure of {abc} over {a,b,c} with high-level {a,c} and observable
/// {b}: the interleaving-sensitivity instance. It is observation consistent,
/// but one interleaving of the pair (ac, ac) is absent from the mapped
/// relational language.
Automaton interleaving_pitfall_plant() {
    Alphabet sigma = make_alphabet({"a", "b", "c"}, {"a", "b", "c"}, {"b"}, {"a", "c"});
    return make_automaton(
        sigma, {"j0", "ja", "jab", "jabc"}, "j0", {"j0", "ja", "jab", "jabc"},
        {{"j0", "a", "ja"}, {"ja", "b", "jab"}, {"jab", "c", "jabc"}});
}

}  // namespace

TEST_CASE("sync_pair_product realizes relational languages") {
    Alphabet one = make_alphabet({"a"});
    Automaton ea;
    ea.alphabet = one;
    ea.add_state("m0", true);
    ea.add_state("m1", true);
    ea.initial = 0;
    ea.add_transition(0, 0, 1);
    ea = validate(std::move(ea));  // marks {e, a}

    SECTION("empty synchronization set gives all interleavings") {
        PairAutomaton pa = sync_pair_product(ea, ea, {});
        auto strings = enumerate_language(pa.aut, 2).strings;
        std::set<std::string> got;
        for (const auto& ps : strings) {
            auto [l, r] = PairAutomaton::decompose(ps);
            got.insert(word_key(l) + "/" + word_key(r));
        }
        std::set<std::string> want;
        for (const auto& l : {Word{}, Word{"a"}})
            for (const auto& r : {Word{}, Word{"a"}}) want.insert(word_key(l) + "/" + word_key(r));
        CHECK(got == want);
    }

    SECTION("the abstraction pair (ab, b) lies in the left-hand relational language") {
        Automaton l = oc_violating_plant();
        ProjectionContext ctx{l.alphabet};
        Automaton ql = project(l, {"a", "b"});
        PairAutomaton lhs = sync_pair_product(ql, ql, {"b"});
        CHECK(member(lhs.aut, {"a|-", "b|b"}));
    }

    SECTION("the diagonal is always present") {
        Automaton l = tiny_gap_plant();
        PairAutomaton pa = sync_pair_product(l, l, {"a", "c"});
        for (const auto& w : enumerate_language(l, 3).strings) {
            Word diag;
            for (const auto& e : w) {
                if (e == "a" || e == "c") {
                    diag.push_back(e + "|" + e);
                } else {
                    diag.push_back(e + "|-");
                    diag.push_back("-|" + e);
                }
            }
            CHECK(member(pa.aut, diag));
        }
    }

    SECTION("accepted pair-strings always agree on the synchronized events") {
        for (uint64_t seed = 500; seed < 506; ++seed) {
            Automaton a = testutil::random_nfa(seed, 4, 2);
            Automaton b = testutil::random_nfa(seed + 321, 4, 2);
            PairAutomaton pa = sync_pair_product(a, b, {"a"});
            for (const auto& ps : enumerate_language(pa.aut, 6).strings) {
                auto [l, r] = PairAutomaton::decompose(ps);
                CHECK(member(a, l));
                CHECK(member(b, r));
                Word pl, pr;
                for (const auto& e : l)
                    if (e == "a") pl.push_back(e);
                for (const auto& e : r)
                    if (e == "a") pr.push_back(e);
                CHECK(pl == pr);
            }
        }
    }

    SECTION("synchronizing on an unshared event is an error") {
        Automaton other = make_automaton(make_alphabet({"z"}), {"q"}, "q", {"q"}, {});
        CHECK_THROWS_AS(sync_pair_product(ea, other, {"a"}), Error);
    }
}

TEST_CASE("map_pairs relabels componentwise") {
    Automaton l = tiny_gap_plant();
    ProjectionContext ctx = gap_ctx();

    SECTION("abstracting both components of the pair (ac, bac) gives (c, bc)") {
        Automaton wa = word_automaton(l.alphabet, word_from("ac"));
        Automaton wb = word_automaton(l.alphabet, word_from("bac"));
        PairAutomaton pa = sync_pair_product(wa, wb, {"a", "c"});
        PairAutomaton mapped = map_pairs_abstraction(pa, ctx);
        auto strings = enumerate_language(mapped.aut, 6).strings;
        REQUIRE_FALSE(strings.empty());
        for (const auto& ps : strings) {
            auto [x, y] = PairAutomaton::decompose(ps);
            CHECK(x == word_from("c"));
            CHECK(y == word_from("bc"));
        }
    }

    SECTION("abstracting only the right component of (c, bac) gives (c, bc)") {
        Automaton wa = word_automaton(l.alphabet, word_from("c"));
        Automaton wb = word_automaton(l.alphabet, word_from("bac"));
        PairAutomaton pa = sync_pair_product(wa, wb, {"c"});
        PairAutomaton mapped = map_pairs_right_abstraction(pa, ctx);
        auto strings = enumerate_language(mapped.aut, 6).strings;
        REQUIRE_FALSE(strings.empty());
        for (const auto& ps : strings) {
            auto [x, y] = PairAutomaton::decompose(ps);
            CHECK(x == word_from("c"));
            CHECK(y == word_from("bc"));
        }
    }

    SECTION("with every event high-level the relabeling is the identity") {
        Alphabet full = with_highlevel(l.alphabet, {"a", "b", "c"});
        Automaton lf = l;
        lf.alphabet = full;
        PairAutomaton pa = sync_pair_product(lf, lf, {"a", "c"});
        PairAutomaton mapped = map_pairs_abstraction(pa, ProjectionContext{full});
        CHECK(equivalent(mapped.aut, pa.aut));
    }
}

TEST_CASE("oc_pair_witness") {
    Automaton l = tiny_gap_plant();
    ProjectionContext ctx = gap_ctx();

    SECTION("the pair (c, bc) lifts through (ac, bac)") {
        auto w = oc_pair_witness(l, ctx, word_from("c"), word_from("bc"));
        REQUIRE(w.has_value());
        CHECK(w->first == word_from("ac"));
        CHECK(w->second == word_from("bac"));
        CHECK(ctx.observation(w->first) == ctx.observation(w->second));
    }

    SECTION("equal strings lift along the diagonal") {
        auto w = oc_pair_witness(l, ctx, word_from("c"), word_from("c"));
        REQUIRE(w.has_value());
        CHECK(w->first == w->second);
    }

    SECTION("no lift exists for the violating abstraction pair") {
        Automaton v = oc_violating_plant();
        ProjectionContext vctx{v.alphabet};
        CHECK_FALSE(oc_pair_witness(v, vctx, word_from("ab"), word_from("b")).has_value());
    }
}

TEST_CASE("moc_pair_witness") {
    Automaton l = tiny_gap_plant();
    ProjectionContext ctx = gap_ctx();

    SECTION("s = c cannot match t' = bc") {
        CHECK_FALSE(moc_pair_witness(l, ctx, word_from("c"), word_from("bc")).has_value());
    }

    SECTION("t' = Q(s) is witnessed by s itself") {
        auto w = moc_pair_witness(l, ctx, word_from("ac"), word_from("c"));
        REQUIRE(w.has_value());
        CHECK(*w == word_from("ac"));
    }
}

TEST_CASE("sufficient_moc") {
    CHECK_FALSE(sufficient_moc(gap_ctx()));  // {a,c} and {b,c} are incomparable
    Alphabet eq = make_alphabet({"a", "b"}, {}, {"a"}, {"a"});
    CHECK(sufficient_moc(ProjectionContext{eq}));  // observable = high-level
    Alphabet hi_in_o = make_alphabet({"a", "b"}, {}, {"a", "b"}, {"b"});
    CHECK(sufficient_moc(ProjectionContext{hi_in_o}));
}

TEST_CASE("check_oc") {
    SECTION("the seven-string language is observation consistent") {
        Verdict v = check_oc(tiny_gap_plant(), gap_ctx());
        CHECK(v.kind == Verdict::Kind::Holds);
        CHECK(v.holds_by == Verdict::HoldsBy::ExhaustiveFinite);
    }

    SECTION("the (ab, b) configuration is violated") {
        Automaton l = oc_violating_plant();
        Verdict v = check_oc(l, ProjectionContext{l.alphabet});
        REQUIRE(v.kind == Verdict::Kind::Violated);
        REQUIRE(v.counterexample.size() == 2);
        CHECK(v.counterexample[0] == word_from("ab"));
        CHECK(v.counterexample[1] == word_from("b"));
        // A violation must independently re-fail the per-pair check.
        CHECK_FALSE(
            oc_pair_witness(l, ProjectionContext{l.alphabet}, v.counterexample[0],
                            v.counterexample[1])
                .has_value());
    }

    SECTION("observable inside high-level short-circuits") {
        Alphabet sigma = make_alphabet({"a", "b"}, {}, {"a"}, {"a", "b"});
        Automaton l = universal_automaton(sigma);
        Verdict v = check_oc(l, ProjectionContext{sigma});
        CHECK(v.kind == Verdict::Kind::Holds);
        CHECK(v.holds_by == Verdict::HoldsBy::SufficientCondition);
    }

    SECTION("non-prefix-closed input is rejected") {
        Alphabet sigma = make_alphabet({"a"});
        Automaton bad;
        bad.alphabet = sigma;
        bad.add_state("q0", false);
        bad.add_state("q1", true);
        bad.initial = 0;
        bad.add_transition(0, 0, 1);
        bad = validate(std::move(bad));
        CHECK_THROWS_AS(check_oc(bad, ProjectionContext{sigma}), Error);
    }
}

TEST_CASE("check_moc") {
    SECTION("the seven-string language fails with the pair (c, bc)") {
        Verdict v = check_moc(tiny_gap_plant(), gap_ctx());
        REQUIRE(v.kind == Verdict::Kind::Violated);
        REQUIRE(v.counterexample.size() == 2);
        CHECK(v.counterexample[0] == word_from("c"));
        CHECK(v.counterexample[1] == word_from("bc"));
    }

    SECTION("high-level inside observable short-circuits") {
        Alphabet sigma = make_alphabet({"a", "b"}, {}, {"a", "b"}, {"b"});
        Automaton l = universal_automaton(sigma);
        Verdict v = check_moc(l, ProjectionContext{sigma});
        CHECK(v.kind == Verdict::Kind::Holds);
        CHECK(v.holds_by == Verdict::HoldsBy::SufficientCondition);
    }

    SECTION("a universal gadget shows no violation at any tested bound") {
        Alphabet one = make_alphabet({"a"});
        Automaton univ = universal_automaton(one);
        auto gadget = testgen::pspace_gadget(univ);
        Verdict v = check_moc(gadget.b, gadget.ctx(), 12);
        CHECK(v.kind != Verdict::Kind::Violated);
    }
}

TEST_CASE("check_loc") {
    SECTION("no controllable high-level events means an empty quantifier domain") {
        Alphabet sigma = make_alphabet({"a", "b"}, {"a"}, {"a"}, {"b"});
        Automaton l = universal_automaton(sigma);
        Verdict v = check_loc(l, ProjectionContext{sigma});
        CHECK(v.kind == Verdict::Kind::Holds);
        CHECK(v.holds_by == Verdict::HoldsBy::ExhaustiveFinite);
    }

    SECTION("identity abstraction always passes") {
        Automaton l = tiny_gap_plant();
        Alphabet full = with_highlevel(l.alphabet, {"a", "b", "c"});
        Automaton lf = l;
        lf.alphabet = full;
        Verdict v = check_loc(lf, ProjectionContext{full});
        CHECK(v.kind != Verdict::Kind::Violated);
    }

    SECTION("one branch extends to the controllable event, the other does not") {
        // closure({ae, ab}) with a observable, b unobservable, e high-level.
        Alphabet sigma = make_alphabet({"a", "b", "e"}, {"e"}, {"a"}, {"e"});
        Automaton l = make_automaton(sigma, {"r0", "ra", "rae", "rab"}, "r0",
                                     {"r0", "ra", "rae", "rab"},
                                     {{"r0", "a", "ra"}, {"ra", "e", "rae"}, {"ra", "b", "rab"}});
        ProjectionContext ctx{sigma};
        // Oracle first.
        Verdict brute = testgen::brute_loc(l, ctx, 6);
        REQUIRE(brute.kind == Verdict::Kind::Violated);
        CHECK(brute.counterexample[0] == word_from("a"));
        CHECK(brute.counterexample[1] == word_from("ab"));
        CHECK(brute.counterexample[2] == word_from("e"));
        Verdict v = check_loc(l, ctx);
        REQUIRE(v.kind == Verdict::Kind::Violated);
        CHECK(v.counterexample == brute.counterexample);
    }
}

TEST_CASE("brute oracles agree with the checkers on random acyclic instances") {
    int oc_viol = 0, moc_viol = 0;
    for (uint64_t seed = 1000; seed < 1100; ++seed) {
        auto inst = testgen::random_instance(seed, testgen::Profile::AcyclicSmall);
        Automaton l = generated_automaton(inst.plant);
        ProjectionContext ctx{l.alphabet};
        int longest = longest_marked_length(l);
        int depth = 2 * longest + 2;

        Verdict b_oc = testgen::brute_oc(l, ctx, depth);
        Verdict c_oc = check_oc(l, ctx, depth);
        Verdict b_moc = testgen::brute_moc(l, ctx, depth);
        Verdict c_moc = check_moc(l, ctx, depth);

        if (c_oc.holds_by != Verdict::HoldsBy::SufficientCondition) {
            CHECK(b_oc.violated() == c_oc.violated());
        } else {
            CHECK_FALSE(b_oc.violated());
        }
        if (c_moc.holds_by != Verdict::HoldsBy::SufficientCondition) {
            CHECK(b_moc.violated() == c_moc.violated());
        } else {
            CHECK_FALSE(b_moc.violated());
        }

        if (c_oc.violated()) {
            ++oc_viol;
            CHECK_FALSE(
                oc_pair_witness(l, ctx, c_oc.counterexample[0], c_oc.counterexample[1])
                    .has_value());
        }
        if (c_moc.violated()) {
            ++moc_viol;
            CHECK_FALSE(
                moc_pair_witness(l, ctx, c_moc.counterexample[0], c_moc.counterexample[1])
                    .has_value());
        }

        // A modified-consistency violation on (t, t') transfers: whenever the
        // plain condition fails, so does the modified one.
        if (b_oc.violated()) CHECK(b_moc.violated());
    }
    CHECK(oc_viol > 0);
    CHECK(moc_viol > 0);
}

TEST_CASE("oc violation transfers to moc per-pair checks at the same bound") {
    for (uint64_t seed = 2000; seed < 2050; ++seed) {
        auto inst = testgen::random_instance(seed, testgen::Profile::AcyclicSmall);
        Automaton l = generated_automaton(inst.plant);
        ProjectionContext ctx{l.alphabet};
        if (sufficient_moc(ctx)) continue;
        int depth = 2 * longest_marked_length(l) + 2;
        Verdict oc = check_oc(l, ctx, depth);
        if (!oc.violated()) continue;
        const Word& t = oc.counterexample[0];
        const Word& tp = oc.counterexample[1];
        Verdict moc = check_moc(l, ctx, depth);
        CHECK(moc.violated());
        for (const auto& s : enumerate_language(l, depth).strings) {
            if (ctx.abstraction(s) != t) continue;
            CHECK_FALSE(moc_pair_witness(l, ctx, s, tp).has_value());
        }
    }
}

TEST_CASE("interleaving pitfall: a sampled missing interleaving is not a violation") {
    Automaton l = interleaving_pitfall_plant();
    ProjectionContext ctx{l.alphabet};

    // The raw relational inclusion is order-sensitive: this interleaving of
    // the pair (ac, ac) is absent from the mapped right-hand language...
    Automaton L = trim(determinize(l));
    for (int i = 0; i < L.num_states(); ++i) L.marked[i] = true;
    PairAutomaton rhs =
        map_pairs_abstraction(sync_pair_product(L, L, {"b"}), ctx);
    CHECK_FALSE(member(rhs.aut, {"a|-", "c|-", "-|a", "-|c"}));
    // ...while a permutation of the same pair is present.
    CHECK(member(rhs.aut, {"a|-", "-|a", "c|-", "-|c"}));

    // The definition-level oracle certifies consistency, and the checker must
    // not report a violation.
    Verdict brute = testgen::brute_oc(l, ctx, 8);
    CHECK(brute.kind == Verdict::Kind::Holds);
    Verdict v = check_oc(l, ctx, 16);
    CHECK(v.kind != Verdict::Kind::Violated);
}
