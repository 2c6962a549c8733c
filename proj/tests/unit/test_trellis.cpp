#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "turbodec/errors.hpp"
#include "turbodec/trellis.hpp"

using namespace turbodec;

TEST_CASE("lte trellis matches an independently stepped state machine") {
    const Trellis t = lte_trellis();
    CHECK(t.num_states == 8);
    CHECK(t.memory == 3);

    // hand-checked tables for (1, (1+D^2+D^3)/(1+D+D^3))
    const int next_expected[8][2] = {{0, 1}, {3, 2}, {4, 5}, {7, 6},
                                     {1, 0}, {2, 3}, {5, 4}, {6, 7}};
    const int parity_expected[8][2] = {{0, 1}, {1, 0}, {1, 0}, {0, 1},
                                       {0, 1}, {1, 0}, {1, 0}, {0, 1}};
    for (int s = 0; s < 8; ++s)
        for (int u = 0; u < 2; ++u) {
            CHECK(t.next_state[s][u] == next_expected[s][u]);
            CHECK(t.parity_out[s][u] == parity_expected[s][u]);
        }

    // cross-check: walking the tables and stepping the bit-level
    // reference encoder over the same inputs gives the same parities
    testing::RefRsc ref(testing::kRefLte);
    int state = 0;
    int u = 0;
    for (int i = 0; i < 64; ++i) {
        u = (u * 5 + i) % 2;
        CHECK(t.parity_out[state][u] == ref.step(u));
        state = t.next_state[state][u];
    }
}

TEST_CASE("zero state is absorbing under input 0") {
    for (const Trellis& t : {lte_trellis(), turbo757_trellis()}) {
        CHECK(t.next_state[0][0] == 0);
        CHECK(t.parity_out[0][0] == 0);
    }
}

TEST_CASE("turbo757 trellis") {
    const Trellis t = turbo757_trellis();
    CHECK(t.num_states == 4);
    const int next_expected[4][2] = {{0, 1}, {3, 2}, {1, 0}, {2, 3}};
    const int parity_expected[4][2] = {{0, 1}, {1, 0}, {0, 1}, {1, 0}};
    for (int s = 0; s < 4; ++s)
        for (int u = 0; u < 2; ++u) {
            CHECK(t.next_state[s][u] == next_expected[s][u]);
            CHECK(t.parity_out[s][u] == parity_expected[s][u]);
        }
}

TEST_CASE("transition structure invariants") {
    for (const Trellis& t : {lte_trellis(), turbo757_trellis()}) {
        // per input bit, state -> next_state is a bijection
        for (int u = 0; u < 2; ++u) {
            std::set<int> targets;
            for (int s = 0; s < t.num_states; ++s) targets.insert(t.next_state[s][u]);
            CHECK(targets.size() == std::size_t(t.num_states));
        }
        // prev_transitions is the exact inverse relation
        int edges = 0;
        for (int s = 0; s < t.num_states; ++s)
            for (const Transition& tr : t.prev_transitions[s]) {
                CHECK(t.next_state[tr.from][tr.input] == s);
                ++edges;
            }
        CHECK(edges == 2 * t.num_states);
        // termination reaches state 0 from everywhere within m steps
        for (int s0 = 0; s0 < t.num_states; ++s0) {
            int s = s0;
            for (int j = 0; j < t.memory; ++j) s = t.next_state[s][t.termination_input[s]];
            CHECK(s == 0);
        }
    }
}

TEST_CASE("malformed specs are rejected") {
    CHECK_THROWS_AS(build_trellis({0, 1, 1}), ConfigError);
    CHECK_THROWS_AS(build_trellis({3, 0b1101, 0b1010}), ConfigError);  // no constant term
    CHECK_THROWS_AS(build_trellis({2, 0b11011, 0b111}), ConfigError);  // degree > m
    CHECK_THROWS_AS(build_trellis({3, 0b1101, 0b0011}), ConfigError);  // degree < m feedback
}
