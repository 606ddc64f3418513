#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "hac/alphabet.hpp"
#include "hac/formula.hpp"

namespace hac
{

// Finite-word semantics over non-empty words; these functions are the ground
// truth that compiled models are checked against. All of them validate the
// word against `sigma` and throw domain_error on empty words, foreign symbols
// or positions outside 0..n-1.

/// trace[i] = 1 iff (word, i) |= f.
std::vector<bool> trace( const formula& f, const alphabet& sigma, std::string_view word );

bool eval_at( const formula& f, const alphabet& sigma, std::string_view word, std::size_t i );

/// |{ j in 0..i : (word, j) |= f }|
std::size_t count_left( const formula& f, const alphabet& sigma, std::string_view word, std::size_t i );

/// |{ j in i..n-1 : (word, j) |= f }|
std::size_t count_right( const formula& f, const alphabet& sigma, std::string_view word, std::size_t i );

/// (word, 0) |= f
bool accepts( const formula& f, const alphabet& sigma, std::string_view word );

} // namespace hac
