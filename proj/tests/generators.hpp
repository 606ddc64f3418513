#pragma once

// Small hand-rolled generators for the property tests. Every generator takes
// the engine explicitly so that failures reproduce from the seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hac/alphabet.hpp"
#include "hac/formula.hpp"
#include "hac/predicate.hpp"

namespace gen
{

using engine = std::mt19937_64;

inline std::size_t below( engine& rng, std::size_t bound )
{
    return std::uniform_int_distribution<std::size_t>{ 0, bound - 1 }( rng );
}

inline std::string word( engine& rng, const hac::alphabet& sigma, std::size_t len )
{
    std::string w( len, ' ' );
    for ( auto& c : w )
    {
        c = sigma.symbols()[below( rng, sigma.size() )];
    }
    return w;
}

inline std::vector<bool> bits( engine& rng, std::size_t len )
{
    std::vector<bool> out( len );
    for ( std::size_t k = 0; k < len; ++k )
    {
        out[k] = below( rng, 2 ) == 1;
    }
    return out;
}

/// The word over {a, b} whose a-positions are the set bits.
inline std::string word_of_bits( const std::vector<bool>& column )
{
    std::string w;
    for ( bool b : column )
    {
        w += b ? 'a' : 'b';
    }
    return w;
}

inline hac::unary_predicate predicate( engine& rng )
{
    switch ( below( rng, 4 ) )
    {
    case 0: return hac::unary_predicate::even();
    case 1: return hac::unary_predicate::mod( 3, static_cast<std::int64_t>( below( rng, 3 ) ) );
    case 2: return hac::unary_predicate::geq( static_cast<std::int64_t>( below( rng, 4 ) ) );
    default: return hac::unary_predicate::midpoint();
    }
}

/// Random LTL(Mon) formula of the given depth over sigma.
inline hac::formula mon_formula( engine& rng, const hac::alphabet& sigma, int depth )
{
    using hac::formula;
    if ( depth <= 0 || below( rng, 5 ) == 0 )
    {
        switch ( below( rng, 6 ) )
        {
        case 0: return formula::top();
        case 1: return formula::pred( predicate( rng ) );
        default: return formula::atom( sigma.symbols()[below( rng, sigma.size() )] );
        }
    }
    switch ( below( rng, 5 ) )
    {
    case 0: return formula::negation( mon_formula( rng, sigma, depth - 1 ) );
    case 1: return formula::conjunction( mon_formula( rng, sigma, depth - 1 ), mon_formula( rng, sigma, depth - 1 ) );
    case 2: return formula::disjunction( mon_formula( rng, sigma, depth - 1 ), mon_formula( rng, sigma, depth - 1 ) );
    case 3: return formula::next( mon_formula( rng, sigma, depth - 1 ) );
    default: return formula::until( mon_formula( rng, sigma, depth - 1 ), mon_formula( rng, sigma, depth - 1 ) );
    }
}

/// Random LTL(C,+) formula: Mon structure with counting leaves mixed in.
inline hac::formula cplus_formula( engine& rng, const hac::alphabet& sigma, int depth )
{
    using hac::formula;
    const auto dir = [&] { return below( rng, 2 ) ? hac::count_direction::left : hac::count_direction::right; };
    if ( depth <= 0 || below( rng, 4 ) == 0 )
    {
        if ( below( rng, 2 ) )
        {
            return formula::pred_of_count( predicate( rng ), dir(), mon_formula( rng, sigma, 1 ) );
        }
        std::vector<formula::term> terms;
        const std::size_t count = 1 + below( rng, 3 );
        for ( std::size_t k = 0; k < count; ++k )
        {
            const auto coef = static_cast<std::int64_t>( below( rng, 5 ) ) - 2;
            terms.push_back( { coef == 0 ? 1 : coef, dir(), mon_formula( rng, sigma, 1 ) } );
        }
        return formula::lin_ineq( terms );
    }
    switch ( below( rng, 4 ) )
    {
    case 0: return formula::negation( cplus_formula( rng, sigma, depth - 1 ) );
    case 1: return formula::conjunction( cplus_formula( rng, sigma, depth - 1 ), mon_formula( rng, sigma, 1 ) );
    case 2: return formula::disjunction( mon_formula( rng, sigma, 1 ), cplus_formula( rng, sigma, depth - 1 ) );
    default: return formula::next( cplus_formula( rng, sigma, depth - 1 ) );
    }
}

} // namespace gen
