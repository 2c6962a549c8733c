#include "turbodec/trellis.hpp"

#include <bit>

#include "turbodec/errors.hpp"

namespace turbodec {

namespace {

// State encoding: bit j of the state integer holds register cell j+1,
// cell 1 being the most recent. Shifting in the feedback bit a gives
// next = ((state << 1) | a) masked to `memory` bits.
inline unsigned parity_bits(unsigned mask) { return std::popcount(mask) & 1u; }

}  // namespace

Trellis build_trellis(const RscSpec& spec) {
    if (spec.memory < 1 || spec.memory > 16)
        throw ConfigError("RSC memory must be in [1, 16]");
    if ((spec.feedback & 1u) == 0)
        throw ConfigError("feedback polynomial needs its constant term set");
    const unsigned mask = (1u << spec.memory) - 1u;
    if (spec.feedforward >> (spec.memory + 1) || spec.feedback >> (spec.memory + 1))
        throw ConfigError("polynomial degree exceeds encoder memory");
    if (spec.feedforward == 0)
        throw ConfigError("feedforward polynomial must be nonzero");
    // Without the D^memory feedback tap the state update is not invertible
    // and states would not have exactly two incoming transitions.
    if (((spec.feedback >> spec.memory) & 1u) == 0)
        throw ConfigError("feedback polynomial must have degree equal to memory");

    Trellis t;
    t.memory = spec.memory;
    t.num_states = 1 << spec.memory;
    t.next_state.resize(t.num_states);
    t.parity_out.resize(t.num_states);
    t.prev_transitions.resize(t.num_states);
    t.termination_input.resize(t.num_states);

    const unsigned fb_taps = spec.feedback >> 1;  // aligned with register cells
    const unsigned ff_taps = spec.feedforward >> 1;
    const unsigned ff_const = spec.feedforward & 1u;

    for (int s = 0; s < t.num_states; ++s) {
        t.termination_input[s] = static_cast<std::uint8_t>(parity_bits(fb_taps & unsigned(s)));
        for (int u = 0; u < 2; ++u) {
            const unsigned a = unsigned(u) ^ parity_bits(fb_taps & unsigned(s));
            const unsigned p = (ff_const & a) ^ parity_bits(ff_taps & unsigned(s));
            t.next_state[s][u] = static_cast<std::uint8_t>(((unsigned(s) << 1) | a) & mask);
            t.parity_out[s][u] = static_cast<std::uint8_t>(p);
        }
    }

    std::vector<int> fill(t.num_states, 0);
    for (int s = 0; s < t.num_states; ++s)
        for (int u = 0; u < 2; ++u) {
            const int to = t.next_state[s][u];
            t.prev_transitions[to][fill[to]++] = {static_cast<std::uint8_t>(s),
                                                  static_cast<std::uint8_t>(u)};
        }

    return t;
}

Trellis lte_trellis() { return build_trellis({3, 0b1101u, 0b1011u}); }

Trellis turbo757_trellis() { return build_trellis({2, 0b101u, 0b111u}); }

}  // namespace turbodec
