#pragma once

#include <iosfwd>
#include <string>

#include "turbodec/turbo_decoder.hpp"

namespace turbodec {

/// Weight file schema:
///   {"scheme": "classical|shared|positional", "iterations": M,
///    "K": <positional only>,
///    "weights": [[a1,a2,a3,b1,b2,b3], ...]}
/// Shared entries are numbers; positional entries are length-K arrays.
std::string weights_to_json(const WeightSet& w);
WeightSet weights_from_json(const std::string& text);

void save_weights(const std::string& path, const WeightSet& w);
WeightSet load_weights(const std::string& path);

}  // namespace turbodec
