#pragma once

#include <string>
#include <string_view>

#include "guesswork/sources.hpp"

namespace guesswork {

// Source-spec document: UTF-8 lines of `key = value`, '#' starts a comment,
// lists split on spaces and/or commas. Keys by type:
//   type = iid             probs (m letter probabilities), optional m
//   type = markov          transition (row-major m*m), optional initial
//                          (default equiprobable), optional m
//   type = explicit        m, k, probs (m^k word probabilities in
//                          lexicographic order, first letter most significant)
//   type = counterexample  m, k, eps
// Structural problems throw SpecError naming the line; numeric invariants are
// left to validate()/require_valid().
Source parse_source_spec(std::string_view text);

Source load_source_file(const std::string& path);

}  // namespace guesswork
