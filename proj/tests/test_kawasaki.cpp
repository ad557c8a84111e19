#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "mmdp/auxmdp.hpp"
#include "mmdp/kawasaki.hpp"
#include "mmdp/rng.hpp"

using namespace mmdp;

namespace {

std::map<AuxState, int> relaxed_outcomes(AuxState s, AuxAction a, int L) {
    SiteConfig cfg = post_decision_config(s, a, L);
    std::map<AuxState, int> counts;
    for (const Move& m : cfg.susceptible_moves()) {
        SiteConfig c = cfg;
        c.apply(m);
        auto [w, h] = relax_to_robust(c);
        ++counts[AuxState{w, h}];
    }
    return counts;
}

}  // namespace

TEST_CASE("non-corner detachment leaves seven susceptible moves") {
    SiteConfig cfg = post_decision_config({5, 4}, AuxAction::B1, 10);
    CHECK(cfg.susceptible_moves().size() == 7);
    auto counts = relaxed_outcomes({5, 4}, AuxAction::B1, 10);
    CHECK(counts[AuxState{5, 4}] == 2);
    CHECK(counts[AuxState{5, 5}] == 5);
}

TEST_CASE("corner detachment leaves six susceptible moves") {
    SiteConfig cfg = post_decision_config({5, 5}, AuxAction::B1C, 10);
    CHECK(cfg.susceptible_moves().size() == 6);
    auto counts = relaxed_outcomes({5, 5}, AuxAction::B1C, 10);
    CHECK(counts[AuxState{5, 5}] == 3);
    CHECK(counts[AuxState{5, 6}] == 3);
}

TEST_CASE("corner detachment on a wide cluster can slide") {
    auto counts = relaxed_outcomes({5, 3}, AuxAction::B1C, 10);
    CHECK(counts[AuxState{5, 3}] == 3);
    CHECK(counts[AuxState{5, 4}] == 2);
    CHECK(counts[AuxState{4, 4}] == 1);
}

TEST_CASE("growth at the boundary row completes the circumference") {
    auto counts = relaxed_outcomes({5, 8}, AuxAction::B1, 10);
    CHECK(counts[AuxState{5, 8}] == 1);
    CHECK(counts[AuxState{5, 10}] == 6);

    auto corner = relaxed_outcomes({6, 8}, AuxAction::B1C, 10);
    CHECK(corner[AuxState{6, 8}] == 2);
    CHECK(corner[AuxState{6, 10}] == 4);
}

TEST_CASE("narrow clusters gain extra susceptible moves beside the detachment gap") {
    // When the detaching row is shorter than five sites the particle next to
    // the gap is a corner with a single bond, so it can hop up beside the
    // detached particle at zero energy cost.  Those extra interchanges relax
    // back to the starting rectangle, diluting the growth probability.
    SiteConfig w4 = post_decision_config({4, 8}, AuxAction::B1, 10);
    CHECK(w4.susceptible_moves().size() == 8);
    auto counts4 = relaxed_outcomes({4, 8}, AuxAction::B1, 10);
    CHECK(counts4[AuxState{4, 8}] == 2);
    CHECK(counts4[AuxState{4, 10}] == 6);

    SiteConfig w3 = post_decision_config({3, 5}, AuxAction::B1, 10);
    CHECK(w3.susceptible_moves().size() == 9);
    auto counts3 = relaxed_outcomes({3, 5}, AuxAction::B1, 10);
    CHECK(counts3[AuxState{3, 5}] == 4);
    CHECK(counts3[AuxState{3, 6}] == 5);

    // Width-two columns even expose a shrinking interchange after the corner
    // detaches: the surviving corner can follow it upward and the relaxation
    // drops a full row.
    auto counts2 = relaxed_outcomes({2, 5}, AuxAction::B1C, 10);
    CHECK(counts2[AuxState{2, 4}] == 1);
    CHECK(counts2[AuxState{2, 5}] == 3);
    CHECK(counts2[AuxState{2, 6}] == 3);
}

TEST_CASE("zero-temperature first interchange picks a susceptible move") {
    ModelParams p;
    p.L = 8;
    RngStream rng(99, 0);
    for (int k = 0; k < 20; ++k) {
        SiteConfig cfg = post_decision_config({4, 3}, AuxAction::B1, 8);
        auto susceptible = cfg.susceptible_moves();
        SiteConfig before = cfg;
        Move m = first_interchange(cfg, DynamicsMode::ZeroTemperature, p, rng);
        bool found = false;
        for (const Move& s : susceptible) found = found || (s == m);
        CHECK(found);
        SiteConfig replay = before;
        replay.apply(m);
        CHECK(replay == cfg);
    }
}

TEST_CASE("finite-beta first interchange is mostly susceptible at low temperature") {
    ModelParams p;
    p.L = 8;
    p.beta = 8.0;
    RngStream rng(123, 1);
    int susceptible_count = 0;
    const int trials = 500;
    for (int k = 0; k < trials; ++k) {
        SiteConfig cfg = post_decision_config({4, 3}, AuxAction::B1, 8);
        auto susceptible = cfg.susceptible_moves();
        Move m = first_interchange(cfg, DynamicsMode::FiniteBeta, p, rng);
        for (const Move& s : susceptible)
            if (s == m) {
                ++susceptible_count;
                break;
            }
    }
    CHECK(susceptible_count > trials * 95 / 100);
}

TEST_CASE("relaxation restores a rectangle after an interchange") {
    RngStream rng(5, 0);
    for (AuxState s : {AuxState{4, 4}, AuxState{6, 3}, AuxState{8, 5}}) {
        for (AuxAction a : aux_action_set(s, 10)) {
            if (a == AuxAction::Stay) continue;
            SiteConfig cfg = post_decision_config(s, a, 10);
            auto moves = cfg.susceptible_moves();
            SiteConfig c = cfg;
            c.apply(moves[rng.uniform_int(moves.size())]);
            auto [w, h] = relax_to_robust(c);
            CHECK(w >= 2);
            CHECK(h >= 2);
        }
    }
}

TEST_CASE("deterministic rng streams") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    for (int k = 0; k < 100; ++k) {
        auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(a.uniform_int(10) == b.uniform_int(10));
    }
    bool differs = false;
    RngStream a2(42, 7);
    for (int k = 0; k < 10; ++k) differs = differs || (a2.next_u64() != c.next_u64());
    CHECK(differs);
}
