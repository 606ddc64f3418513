#include "hac/parser.hpp"

#include <cctype>
#include <limits>

#include "hac/error.hpp"

namespace hac
{

namespace
{

class parser
{
public:
    parser( std::string_view text, const alphabet& sigma, const table_registry& tables )
        : _text{ text }, _sigma{ sigma }, _tables{ tables }
    {
    }

    formula run()
    {
        formula f = parse_or();
        skip_space();
        if ( _pos != _text.size() )
        {
            fail( std::string{ "unexpected '" } + _text[_pos] + "'" );
        }
        return f;
    }

private:
    [[noreturn]] void fail( const std::string& message ) const { throw parse_error( message, _pos ); }
    [[noreturn]] void fail_at( const std::string& message, std::size_t pos ) const
    {
        throw parse_error( message, pos );
    }

    void skip_space()
    {
        while ( _pos < _text.size() && std::isspace( static_cast<unsigned char>( _text[_pos] ) ) )
        {
            ++_pos;
        }
    }

    bool at_end()
    {
        skip_space();
        return _pos >= _text.size();
    }

    char peek()
    {
        skip_space();
        return _pos < _text.size() ? _text[_pos] : '\0';
    }

    bool starts_with( std::string_view token )
    {
        skip_space();
        return _text.substr( _pos, token.size() ) == token;
    }

    bool accept( std::string_view token )
    {
        if ( starts_with( token ) )
        {
            _pos += token.size();
            return true;
        }
        return false;
    }

    void expect( std::string_view token )
    {
        if ( !accept( token ) )
        {
            fail( "expected '" + std::string{ token } + "'" + ( at_end() ? " before end of input" : "" ) );
        }
    }

    // keyword = identifier not followed by another identifier character
    bool accept_keyword( std::string_view word )
    {
        if ( !starts_with( word ) )
        {
            return false;
        }
        const std::size_t after = _pos + word.size();
        if ( after < _text.size() && ( std::isalnum( static_cast<unsigned char>( _text[after] ) ) || _text[after] == '_' ) )
        {
            return false;
        }
        _pos = after;
        return true;
    }

    std::string identifier()
    {
        skip_space();
        const std::size_t start = _pos;
        while ( _pos < _text.size() && ( std::isalnum( static_cast<unsigned char>( _text[_pos] ) ) || _text[_pos] == '_' ) )
        {
            ++_pos;
        }
        if ( start == _pos )
        {
            fail( "expected identifier" );
        }
        return std::string{ _text.substr( start, _pos - start ) };
    }

    std::int64_t integer( const char* what )
    {
        skip_space();
        const std::size_t start = _pos;
        bool negative = false;
        if ( _pos < _text.size() && _text[_pos] == '-' )
        {
            negative = true;
            ++_pos;
        }
        const std::size_t digits = _pos;
        while ( _pos < _text.size() && std::isdigit( static_cast<unsigned char>( _text[_pos] ) ) )
        {
            ++_pos;
        }
        if ( digits == _pos )
        {
            fail_at( std::string{ "expected integer " } + what, start );
        }
        // 2.5, 3x, ... are malformed rather than two tokens
        if ( _pos < _text.size() && ( std::isalpha( static_cast<unsigned char>( _text[_pos] ) ) || _text[_pos] == '.' ) )
        {
            fail_at( std::string{ "malformed integer " } + what, start );
        }
        const std::string_view body = _text.substr( digits, _pos - digits );
        constexpr std::int64_t limit = std::numeric_limits<std::int64_t>::max() / 4;
        std::int64_t value = 0;
        for ( char c : body )
        {
            value = value * 10 + ( c - '0' );
            if ( value > limit )
            {
                fail_at( std::string{ "integer " } + what + " out of range", start );
            }
        }
        return negative ? -value : value;
    }

    formula parse_or()
    {
        formula left = parse_and();
        while ( accept( "|" ) )
        {
            left = formula::disjunction( left, parse_and() );
        }
        return left;
    }

    formula parse_and()
    {
        formula left = parse_until();
        while ( accept( "&" ) )
        {
            left = formula::conjunction( left, parse_until() );
        }
        return left;
    }

    formula parse_until()
    {
        formula left = parse_unary();
        if ( accept( "U" ) )
        {
            return formula::until( left, parse_until() );
        }
        return left;
    }

    formula parse_unary()
    {
        if ( accept( "!" ) )
        {
            return formula::negation( parse_unary() );
        }
        if ( accept( "X" ) )
        {
            return formula::next( parse_unary() );
        }
        if ( accept( "F" ) )
        {
            return formula::eventually( parse_unary() );
        }
        if ( accept( "G" ) )
        {
            return formula::globally( parse_unary() );
        }
        return parse_primary();
    }

    formula parse_primary()
    {
        if ( at_end() )
        {
            fail( "unexpected end of input" );
        }
        if ( accept( "(" ) )
        {
            formula f = parse_or();
            expect( ")" );
            return f;
        }
        if ( accept_keyword( "true" ) )
        {
            return formula::top();
        }
        if ( accept_keyword( "false" ) )
        {
            return formula::negation( formula::top() );
        }
        if ( peek() == '@' )
        {
            return parse_predicate();
        }
        if ( peek() == '[' )
        {
            return parse_inequality();
        }
        const char c = peek();
        if ( std::isalpha( static_cast<unsigned char>( c ) ) )
        {
            if ( !_sigma.contains( c ) )
            {
                fail( std::string{ "unknown symbol '" } + c + "' (alphabet \"" + _sigma.symbols() + "\")" );
            }
            ++_pos;
            if ( _pos < _text.size() &&
                 ( _sigma.contains( _text[_pos] ) || std::isdigit( static_cast<unsigned char>( _text[_pos] ) ) ) )
            {
                fail( "symbols are single characters; separate operands with an operator" );
            }
            return formula::atom( c );
        }
        fail( std::string{ "unexpected '" } + c + "'" );
    }

    bool at_count_operand()
    {
        const std::size_t saved = _pos;
        const bool result = accept( "(" ) && ( starts_with( "<-" ) || starts_with( "->" ) );
        _pos = saved;
        return result;
    }

    struct counted
    {
        count_direction direction;
        formula operand;
    };

    counted parse_count()
    {
        count_direction direction;
        if ( accept( "<-" ) )
        {
            direction = count_direction::left;
        }
        else if ( accept( "->" ) )
        {
            direction = count_direction::right;
        }
        else
        {
            fail( "expected '<-#' or '->#'" );
        }
        expect( "#" );
        return counted{ direction, parse_unary() };
    }

    formula parse_predicate()
    {
        expect( "@" );
        const std::size_t name_pos = _pos;
        const std::string name = identifier();
        std::optional<unary_predicate> predicate;
        if ( name == "table" )
        {
            expect( "(" );
            const std::size_t table_pos = _pos;
            const std::string table_name = identifier();
            expect( ")" );
            auto data = _tables.find( table_name );
            if ( !data )
            {
                fail_at( "unknown table '" + table_name + "'", table_pos );
            }
            predicate = unary_predicate::table( data );
        }
        else
        {
            std::vector<std::int64_t> params;
            if ( peek() == '(' && !at_count_operand() )
            {
                expect( "(" );
                if ( !accept( ")" ) )
                {
                    do
                    {
                        params.push_back( integer( "predicate parameter" ) );
                    } while ( accept( "," ) );
                    expect( ")" );
                }
            }
            try
            {
                predicate = make_predicate( name, params );
            }
            catch ( const domain_error& e )
            {
                fail_at( e.what(), name_pos );
            }
        }
        if ( peek() == '(' && at_count_operand() )
        {
            expect( "(" );
            counted c = parse_count();
            expect( ")" );
            return formula::pred_of_count( *predicate, c.direction, c.operand );
        }
        return formula::pred( *predicate );
    }

    formula parse_inequality()
    {
        expect( "[" );
        std::vector<formula::term> terms;
        bool first = true;
        while ( true )
        {
            std::int64_t sign = 1;
            if ( first )
            {
                if ( starts_with( "-" ) && !starts_with( "->" ) )
                {
                    accept( "-" );
                    sign = -1;
                }
            }
            else if ( accept( "+" ) )
            {
                sign = 1;
            }
            else if ( starts_with( "-" ) && !starts_with( "->" ) )
            {
                accept( "-" );
                sign = -1;
            }
            else
            {
                break;
            }
            first = false;
            std::int64_t coef = 1;
            const char c = peek();
            if ( std::isdigit( static_cast<unsigned char>( c ) ) )
            {
                coef = integer( "coefficient" );
                expect( "*" );
            }
            else if ( c != '<' && c != '-' && c != 'c' )
            {
                fail( "malformed integer coefficient" );
            }
            if ( accept_keyword( "const" ) )
            {
                terms.push_back( formula::term{ sign * coef, count_direction::left, formula::top() } );
                continue;
            }
            counted t = parse_count();
            terms.push_back( formula::term{ sign * coef, t.direction, t.operand } );
        }
        if ( terms.empty() )
        {
            fail( "inequality needs at least one term" );
        }
        expect( ">=" );
        const std::size_t rhs_pos = _pos;
        if ( integer( "right-hand side" ) != 0 )
        {
            fail_at( "inequalities must have right-hand side 0 (use k*const)", rhs_pos );
        }
        expect( "]" );
        return formula::lin_ineq( terms );
    }

    std::string_view _text;
    const alphabet& _sigma;
    const table_registry& _tables;
    std::size_t _pos = 0;
};

} // namespace

formula parse_formula( std::string_view text, const alphabet& sigma, const table_registry& tables )
{
    return parser{ text, sigma, tables }.run();
}

} // namespace hac
