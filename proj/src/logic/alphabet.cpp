#include "hac/alphabet.hpp"

#include <cctype>

#include "hac/error.hpp"

namespace hac
{

bool alphabet::is_valid_symbol( char c )
{
    if ( !std::isalpha( static_cast<unsigned char>( c ) ) )
    {
        return false;
    }
    return c != 'X' && c != 'U' && c != 'F' && c != 'G';
}

alphabet::alphabet( std::string symbols ) : _symbols{ std::move( symbols ) }
{
    if ( _symbols.empty() )
    {
        throw domain_error( "alphabet must not be empty" );
    }
    for ( std::size_t k = 0; k < _symbols.size(); ++k )
    {
        const char c = _symbols[k];
        if ( !is_valid_symbol( c ) )
        {
            throw domain_error( std::string{ "invalid alphabet symbol '" } + c + "'" );
        }
        if ( _symbols.find( c ) != k )
        {
            throw domain_error( std::string{ "duplicate alphabet symbol '" } + c + "'" );
        }
    }
}

std::optional<std::size_t> alphabet::index_of( char symbol ) const
{
    const auto pos = _symbols.find( symbol );
    if ( pos == std::string::npos )
    {
        return std::nullopt;
    }
    return pos;
}

void alphabet::validate_word( std::string_view word ) const
{
    if ( word.empty() )
    {
        throw domain_error( "empty word: languages are over non-empty words" );
    }
    for ( std::size_t k = 0; k < word.size(); ++k )
    {
        if ( !contains( word[k] ) )
        {
            throw domain_error( std::string{ "symbol '" } + word[k] + "' at position " + std::to_string( k ) +
                                " is not in alphabet \"" + _symbols + "\"" );
        }
    }
}

} // namespace hac
