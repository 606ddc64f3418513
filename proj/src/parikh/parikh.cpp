#include "hac/parikh.hpp"

#include <algorithm>
#include <numeric>

#include "hac/error.hpp"

namespace hac
{

namespace
{

bool is_zero( const count_vector& v )
{
    return std::all_of( v.begin(), v.end(), []( std::int64_t x ) { return x == 0; } );
}

// Can `rest` be written as sum_{k >= from} m_k periods[k]?
bool decompose( const std::vector<count_vector>& periods, std::size_t from, count_vector rest )
{
    if ( from == periods.size() )
    {
        return is_zero( rest );
    }
    const auto& p = periods[from];
    while ( true )
    {
        if ( decompose( periods, from + 1, rest ) )
        {
            return true;
        }
        for ( std::size_t k = 0; k < rest.size(); ++k )
        {
            rest[k] -= p[k];
            if ( rest[k] < 0 )
            {
                return false;
            }
        }
    }
}

std::int64_t total( const count_vector& v )
{
    return std::accumulate( v.begin(), v.end(), std::int64_t{ 0 } );
}

void enumerate_bounded( const std::vector<count_vector>& periods, std::size_t from, const count_vector& current,
                        std::int64_t budget, std::set<count_vector>& out )
{
    if ( from == periods.size() )
    {
        out.insert( current );
        return;
    }
    count_vector v = current;
    std::int64_t used = total( v );
    const std::int64_t step = total( periods[from] );
    while ( used <= budget )
    {
        enumerate_bounded( periods, from + 1, v, budget, out );
        for ( std::size_t k = 0; k < v.size(); ++k )
        {
            v[k] += periods[from][k];
        }
        used += step;
    }
}

std::string block( const count_vector& v, const alphabet& sigma )
{
    std::string out;
    for ( std::size_t k = 0; k < v.size(); ++k )
    {
        out.append( static_cast<std::size_t>( v[k] ), sigma.symbols()[k] );
    }
    return out;
}

} // namespace

linear_set::linear_set( count_vector base, std::vector<count_vector> periods )
    : _base{ std::move( base ) }, _periods{ std::move( periods ) }
{
    if ( _base.empty() )
    {
        throw domain_error( "linear set needs dimension >= 1" );
    }
    auto check = [&]( const count_vector& v, const char* what ) {
        if ( v.size() != _base.size() )
        {
            throw domain_error( std::string{ what } + " has dimension " + std::to_string( v.size() ) + ", expected " +
                                std::to_string( _base.size() ) );
        }
        if ( std::any_of( v.begin(), v.end(), []( std::int64_t x ) { return x < 0; } ) )
        {
            throw domain_error( std::string{ what } + " has a negative entry" );
        }
    };
    check( _base, "base" );
    for ( const auto& p : _periods )
    {
        check( p, "period" );
        if ( is_zero( p ) )
        {
            throw domain_error( "periods must be non-zero" );
        }
    }
}

bool linear_set::contains( const count_vector& v ) const
{
    if ( v.size() != dimension() )
    {
        throw domain_error( "vector dimension " + std::to_string( v.size() ) + " does not match set dimension " +
                            std::to_string( dimension() ) );
    }
    count_vector rest( v.size() );
    for ( std::size_t k = 0; k < v.size(); ++k )
    {
        rest[k] = v[k] - _base[k];
        if ( rest[k] < 0 )
        {
            return false;
        }
    }
    return decompose( _periods, 0, rest );
}

semilinear_set::semilinear_set( std::vector<linear_set> components ) : _components{ std::move( components ) }
{
    if ( _components.empty() )
    {
        throw domain_error( "semilinear set needs at least one linear set" );
    }
    for ( const auto& c : _components )
    {
        if ( c.dimension() != _components.front().dimension() )
        {
            throw domain_error( "linear sets of a union must share one dimension" );
        }
    }
}

bool semilinear_set::contains( const count_vector& v ) const
{
    return std::any_of( _components.begin(), _components.end(), [&]( const auto& c ) { return c.contains( v ); } );
}

bool semilinear_member( const count_vector& v, const semilinear_set& s )
{
    return s.contains( v );
}

count_vector parikh_vector( std::string_view word, const alphabet& sigma )
{
    count_vector v( sigma.size() );
    for ( char c : word )
    {
        const auto k = sigma.index_of( c );
        if ( !k )
        {
            throw domain_error( std::string{ "symbol '" } + c + "' is not in the alphabet" );
        }
        ++v[*k];
    }
    return v;
}

witness_language::witness_language( const linear_set& s, const alphabet& sigma ) : _sigma{ sigma }
{
    if ( sigma.size() != s.dimension() )
    {
        throw domain_error( "alphabet has " + std::to_string( sigma.size() ) + " letters, set has dimension " +
                            std::to_string( s.dimension() ) );
    }
    _prefix = block( s.base(), sigma );
    for ( const auto& p : s.periods() )
    {
        _periods.push_back( block( p, sigma ) );
    }
}

bool witness_language::contains( std::string_view word ) const
{
    if ( word.substr( 0, _prefix.size() ) != _prefix )
    {
        return false;
    }
    const std::size_t n = word.size();
    const std::size_t r = _periods.size();
    // reach[k][pos]: the first pos symbols are w0 w1^* ... w_k^* with star k still open
    std::vector<std::vector<bool>> reach( r + 1, std::vector<bool>( n + 1, false ) );
    reach[0][_prefix.size()] = true;
    for ( std::size_t k = 0; k <= r; ++k )
    {
        for ( std::size_t pos = 0; pos <= n; ++pos )
        {
            if ( !reach[k][pos] )
            {
                continue;
            }
            if ( k < r )
            {
                reach[k + 1][pos] = true;
            }
            if ( k > 0 )
            {
                const std::string& w = _periods[k - 1];
                if ( word.substr( pos, w.size() ) == w )
                {
                    reach[k][pos + w.size()] = true;
                }
            }
        }
    }
    return reach[r][n];
}

std::string witness_language::pattern( const std::vector<std::string>& names ) const
{
    auto render = [&]( const std::string& w ) {
        std::string out;
        for ( char c : w )
        {
            out += names.at( *_sigma.index_of( c ) );
        }
        return out;
    };
    std::vector<std::string> parts;
    if ( !_prefix.empty() )
    {
        parts.push_back( render( _prefix ) );
    }
    for ( const auto& p : _periods )
    {
        parts.push_back( "(" + render( p ) + ")*" );
    }
    if ( parts.empty() )
    {
        return "ε";
    }
    std::string out = parts.front();
    for ( std::size_t k = 1; k < parts.size(); ++k )
    {
        out += " " + parts[k];
    }
    return out;
}

std::string witness_language::pattern() const
{
    std::vector<std::string> names;
    for ( std::size_t k = 1; k <= _sigma.size(); ++k )
    {
        names.push_back( "a" + std::to_string( k ) );
    }
    return pattern( names );
}

std::set<count_vector> parikh_image( const membership& member, const alphabet& sigma, std::size_t max_total )
{
    std::set<count_vector> out;
    const std::size_t d = sigma.size();
    for ( std::size_t len = 0; len <= max_total; ++len )
    {
        std::vector<std::size_t> digits( len, 0 );
        std::string word( len, sigma.symbols()[0] );
        while ( true )
        {
            if ( member( word ) )
            {
                out.insert( parikh_vector( word, sigma ) );
            }
            std::size_t k = len;
            while ( k > 0 && digits[k - 1] == d - 1 )
            {
                digits[k - 1] = 0;
                word[k - 1] = sigma.symbols()[0];
                --k;
            }
            if ( k == 0 )
            {
                break;
            }
            ++digits[k - 1];
            word[k - 1] = sigma.symbols()[digits[k - 1]];
        }
    }
    return out;
}

std::set<count_vector> bounded_members( const semilinear_set& s, std::size_t max_total )
{
    std::set<count_vector> out;
    for ( const auto& c : s.components() )
    {
        enumerate_bounded( c.periods(), 0, c.base(), static_cast<std::int64_t>( max_total ), out );
    }
    return out;
}

counting_constraint counting_constraint::all_of( std::vector<counting_constraint> parts )
{
    counting_constraint c;
    c._kind = kind::conjunction;
    c._parts = std::move( parts );
    return c;
}

counting_constraint counting_constraint::any_of( std::vector<counting_constraint> parts )
{
    counting_constraint c;
    c._kind = kind::disjunction;
    c._parts = std::move( parts );
    return c;
}

counting_constraint counting_constraint::negation( counting_constraint part )
{
    counting_constraint c;
    c._kind = kind::negation;
    c._parts.push_back( std::move( part ) );
    return c;
}

counting_constraint counting_constraint::inequality( std::vector<std::pair<char, std::int64_t>> coefs,
                                                     std::int64_t constant )
{
    counting_constraint c;
    c._kind = kind::inequality;
    c._coefs = std::move( coefs );
    c._constant = constant;
    return c;
}

counting_constraint counting_constraint::congruence( char letter, std::int64_t modulus, std::int64_t residue )
{
    if ( modulus < 1 || residue < 0 || residue >= modulus )
    {
        throw domain_error( "congruence needs modulus >= 1 and 0 <= residue < modulus" );
    }
    counting_constraint c;
    c._kind = kind::congruence;
    c._letter = letter;
    c._modulus = modulus;
    c._residue = residue;
    return c;
}

void counting_constraint::validate( const alphabet& sigma ) const
{
    auto check = [&]( char letter ) {
        if ( !sigma.contains( letter ) )
        {
            throw domain_error( std::string{ "constraint letter '" } + letter + "' is not in the alphabet \"" +
                                sigma.symbols() + "\"" );
        }
    };
    for ( const auto& [letter, coef] : _coefs )
    {
        check( letter );
    }
    if ( _kind == kind::congruence )
    {
        check( _letter );
    }
    for ( const auto& p : _parts )
    {
        p.validate( sigma );
    }
}

bool counting_constraint::eval( const count_vector& counts, const alphabet& sigma ) const
{
    switch ( _kind )
    {
    case kind::conjunction:
        return std::all_of( _parts.begin(), _parts.end(), [&]( const auto& p ) { return p.eval( counts, sigma ); } );
    case kind::disjunction:
        return std::any_of( _parts.begin(), _parts.end(), [&]( const auto& p ) { return p.eval( counts, sigma ); } );
    case kind::negation: return !_parts.front().eval( counts, sigma );
    case kind::inequality:
    {
        __int128 sum = _constant;
        for ( const auto& [letter, coef] : _coefs )
        {
            sum += static_cast<__int128>( coef ) * counts.at( *sigma.index_of( letter ) );
        }
        return sum >= 0;
    }
    case kind::congruence: return counts.at( *sigma.index_of( _letter ) ) % _modulus == _residue;
    }
    return false;
}

formula constraint_to_formula( const counting_constraint& c, const alphabet& sigma )
{
    c.validate( sigma );
    using kind = counting_constraint::kind;
    switch ( c.type() )
    {
    case kind::conjunction:
    case kind::disjunction:
    {
        const bool conj = c.type() == kind::conjunction;
        if ( c.parts().empty() )
        {
            return conj ? formula::top() : formula::negation( formula::top() );
        }
        formula out = constraint_to_formula( c.parts().front(), sigma );
        for ( std::size_t k = 1; k < c.parts().size(); ++k )
        {
            const formula next = constraint_to_formula( c.parts()[k], sigma );
            out = conj ? formula::conjunction( out, next ) : formula::disjunction( out, next );
        }
        return out;
    }
    case kind::negation: return formula::negation( constraint_to_formula( c.parts().front(), sigma ) );
    case kind::inequality:
    {
        std::vector<formula::term> terms;
        for ( const auto& [letter, coef] : c.coefs() )
        {
            if ( coef != 0 )
            {
                terms.push_back( formula::term{ coef, count_direction::right, formula::atom( letter ) } );
            }
        }
        if ( c.constant() != 0 || terms.empty() )
        {
            terms.push_back( formula::term{ c.constant(), count_direction::left, formula::top() } );
        }
        return formula::lin_ineq( terms );
    }
    case kind::congruence:
        return formula::pred_of_count( unary_predicate::mod( c.modulus(), c.residue() ), count_direction::right,
                                       formula::atom( c.letter() ) );
    }
    throw domain_error( "unknown constraint kind" );
}

bool perm_closure_member( std::string_view w, const membership& base, std::size_t max_len )
{
    if ( w.size() > max_len )
    {
        throw domain_error( "word of length " + std::to_string( w.size() ) + " exceeds the enumeration bound " +
                            std::to_string( max_len ) );
    }
    std::string p{ w };
    std::sort( p.begin(), p.end() );
    do
    {
        if ( base( p ) )
        {
            return true;
        }
    } while ( std::next_permutation( p.begin(), p.end() ) );
    return false;
}

formula prime_example_formula()
{
    const formula last = formula::negation( formula::next( formula::top() ) );
    return formula::eventually( formula::conjunction( formula::pred( unary_predicate::prime_shift() ), last ) );
}

} // namespace hac
