#include "hac/semantics.hpp"

#include <unordered_map>

#include "hac/error.hpp"

namespace hac
{

namespace
{

using column = std::vector<bool>;

class evaluator
{
public:
    evaluator( std::string_view word ) : _word{ word }, _n{ word.size() } {}

    const column& eval( const formula_node& node )
    {
        auto it = _memo.find( &node );
        if ( it != _memo.end() )
        {
            return it->second;
        }
        column result = compute( node );
        return _memo.emplace( &node, std::move( result ) ).first->second;
    }

private:
    std::vector<std::size_t> counts( const formula_node& operand, count_direction direction )
    {
        const column& c = eval( operand );
        std::vector<std::size_t> out( _n );
        if ( direction == count_direction::left )
        {
            std::size_t running = 0;
            for ( std::size_t i = 0; i < _n; ++i )
            {
                running += c[i];
                out[i] = running;
            }
        }
        else
        {
            std::size_t running = 0;
            for ( std::size_t i = _n; i-- > 0; )
            {
                running += c[i];
                out[i] = running;
            }
        }
        return out;
    }

    column compute( const formula_node& node )
    {
        const auto n = static_cast<std::int64_t>( _n );
        column out( _n, false );
        switch ( node.kind )
        {
        case formula_kind::atom:
            for ( std::size_t i = 0; i < _n; ++i )
            {
                out[i] = _word[i] == node.symbol;
            }
            break;
        case formula_kind::top: out.assign( _n, true ); break;
        case formula_kind::pred:
            for ( std::size_t i = 0; i < _n; ++i )
            {
                out[i] = node.predicate->eval( n, static_cast<std::int64_t>( i ) );
            }
            break;
        case formula_kind::negation:
        {
            const column& a = eval( *node.children[0] );
            for ( std::size_t i = 0; i < _n; ++i )
            {
                out[i] = !a[i];
            }
            break;
        }
        case formula_kind::conjunction:
        case formula_kind::disjunction:
        {
            const column a = eval( *node.children[0] );
            const column& b = eval( *node.children[1] );
            for ( std::size_t i = 0; i < _n; ++i )
            {
                out[i] = node.kind == formula_kind::conjunction ? ( a[i] && b[i] ) : ( a[i] || b[i] );
            }
            break;
        }
        case formula_kind::next:
        {
            const column& a = eval( *node.children[0] );
            for ( std::size_t i = 0; i + 1 < _n; ++i )
            {
                out[i] = a[i + 1];
            }
            break;
        }
        case formula_kind::until:
        {
            const column phi = eval( *node.children[0] );
            const column& psi = eval( *node.children[1] );
            // (w,i) |= phi U psi  iff  psi(i) or (phi(i) and (w,i+1) |= phi U psi), with no witness past n-1
            bool later = false;
            for ( std::size_t i = _n; i-- > 0; )
            {
                out[i] = psi[i] || ( phi[i] && later );
                later = out[i];
            }
            break;
        }
        case formula_kind::pred_of_count:
        {
            const auto c = counts( *node.children[0], node.direction );
            for ( std::size_t i = 0; i < _n; ++i )
            {
                out[i] = node.predicate->eval( n, static_cast<std::int64_t>( c[i] ) );
            }
            break;
        }
        case formula_kind::lin_ineq:
        {
            std::vector<__int128> sum( _n, 0 );
            for ( const auto& t : node.terms )
            {
                const auto c = counts( *t.operand, t.direction );
                for ( std::size_t i = 0; i < _n; ++i )
                {
                    sum[i] += static_cast<__int128>( t.coef ) * static_cast<__int128>( c[i] );
                }
            }
            for ( std::size_t i = 0; i < _n; ++i )
            {
                out[i] = sum[i] >= 0;
            }
            break;
        }
        }
        return out;
    }

    std::string_view _word;
    std::size_t _n;
    std::unordered_map<const formula_node*, column> _memo;
};

void check_position( std::string_view word, std::size_t i )
{
    if ( i >= word.size() )
    {
        throw domain_error( "position " + std::to_string( i ) + " out of range for word of length " +
                            std::to_string( word.size() ) );
    }
}

} // namespace

std::vector<bool> trace( const formula& f, const alphabet& sigma, std::string_view word )
{
    sigma.validate_word( word );
    evaluator e{ word };
    return e.eval( *f.node() );
}

bool eval_at( const formula& f, const alphabet& sigma, std::string_view word, std::size_t i )
{
    sigma.validate_word( word );
    check_position( word, i );
    return trace( f, sigma, word )[i];
}

std::size_t count_left( const formula& f, const alphabet& sigma, std::string_view word, std::size_t i )
{
    sigma.validate_word( word );
    check_position( word, i );
    const auto t = trace( f, sigma, word );
    std::size_t c = 0;
    for ( std::size_t j = 0; j <= i; ++j )
    {
        c += t[j];
    }
    return c;
}

std::size_t count_right( const formula& f, const alphabet& sigma, std::string_view word, std::size_t i )
{
    sigma.validate_word( word );
    check_position( word, i );
    const auto t = trace( f, sigma, word );
    std::size_t c = 0;
    for ( std::size_t j = i; j < word.size(); ++j )
    {
        c += t[j];
    }
    return c;
}

bool accepts( const formula& f, const alphabet& sigma, std::string_view word )
{
    return eval_at( f, sigma, word, 0 );
}

} // namespace hac
