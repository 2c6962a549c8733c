#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace turbodec {

/// Recursive systematic convolutional code 1/(feedback) * (feedforward).
/// Polynomial bitmasks: bit i is the coefficient of D^i, so the LTE
/// constituent code g1 = 1 + D^2 + D^3, g2 = 1 + D + D^3 reads as
/// {memory = 3, feedforward = 0b1101, feedback = 0b1011}.
struct RscSpec {
    int memory = 0;
    unsigned feedforward = 0;
    unsigned feedback = 0;
};

struct Transition {
    std::uint8_t from;
    std::uint8_t input;
};

/// Dense transition tables of an RSC encoder. Immutable after
/// construction; shared freely between concurrent decoders.
struct Trellis {
    int memory = 0;
    int num_states = 0;
    std::vector<std::array<std::uint8_t, 2>> next_state;        // [state][input]
    std::vector<std::array<std::uint8_t, 2>> parity_out;        // [state][input]
    std::vector<std::array<Transition, 2>> prev_transitions;    // [state] -> incoming edges
    std::vector<std::uint8_t> termination_input;                // input that zeroes the feedback
};

/// Builds the transition tables by stepping the shift register once per
/// (state, input) pair. Throws ConfigError for malformed polynomials
/// (degree > memory, or feedback without constant term).
Trellis build_trellis(const RscSpec& spec);

/// LTE constituent code: (1, (1+D^2+D^3)/(1+D+D^3)), 8 states.
Trellis lte_trellis();

/// (1, (1+D^2)/(1+D+D^2)), 4 states.
Trellis turbo757_trellis();

}  // namespace turbodec
