#include "hac/error.hpp"
#include "hac/parikh.hpp"

namespace hac
{

using nlohmann::ordered_json;

namespace
{

count_vector read_vector( const ordered_json& doc, const char* what )
{
    if ( !doc.is_array() )
    {
        throw format_error( std::string{ what } + " must be an array of naturals" );
    }
    count_vector v;
    for ( const auto& x : doc )
    {
        if ( !x.is_number_integer() || x.get<std::int64_t>() < 0 )
        {
            throw format_error( std::string{ what } + " entries must be non-negative integers" );
        }
        v.push_back( x.get<std::int64_t>() );
    }
    return v;
}

std::int64_t read_int( const ordered_json& doc, const char* what )
{
    if ( !doc.is_number_integer() )
    {
        throw format_error( std::string{ what } + " must be an integer" );
    }
    return doc.get<std::int64_t>();
}

char read_letter( const std::string& text )
{
    if ( text.size() != 1 )
    {
        throw format_error( "constraint letters are single characters, got \"" + text + "\"" );
    }
    return text[0];
}

template <typename F>
auto domain_as_format( F&& f )
{
    try
    {
        return f();
    }
    catch ( const domain_error& e )
    {
        throw format_error( e.what() );
    }
}

} // namespace

linear_set linear_set_from_json( const ordered_json& doc )
{
    if ( !doc.is_object() || !doc.contains( "base" ) )
    {
        throw format_error( "linear set document needs a \"base\" field" );
    }
    for ( const auto& item : doc.items() )
    {
        if ( item.key() != "base" && item.key() != "periods" )
        {
            throw format_error( "linear set: unknown field '" + item.key() + "'" );
        }
    }
    count_vector base = read_vector( doc["base"], "base" );
    std::vector<count_vector> periods;
    if ( doc.contains( "periods" ) )
    {
        if ( !doc["periods"].is_array() )
        {
            throw format_error( "periods must be an array of vectors" );
        }
        for ( const auto& p : doc["periods"] )
        {
            periods.push_back( read_vector( p, "period" ) );
        }
    }
    return domain_as_format( [&] { return linear_set{ std::move( base ), std::move( periods ) }; } );
}

semilinear_set semilinear_set_from_json( const ordered_json& doc )
{
    if ( doc.is_object() && doc.contains( "union" ) )
    {
        if ( doc.size() != 1 || !doc["union"].is_array() )
        {
            throw format_error( "union document must be {\"union\": [linear sets]}" );
        }
        std::vector<linear_set> parts;
        for ( const auto& c : doc["union"] )
        {
            parts.push_back( linear_set_from_json( c ) );
        }
        return domain_as_format( [&] { return semilinear_set{ std::move( parts ) }; } );
    }
    return semilinear_set{ { linear_set_from_json( doc ) } };
}

counting_constraint constraint_from_json( const ordered_json& doc )
{
    if ( !doc.is_object() || doc.size() != 1 )
    {
        throw format_error( "constraint must be an object with exactly one of and/or/not/ineq/cong" );
    }
    const std::string key = doc.begin().key();
    const ordered_json& body = doc.begin().value();
    if ( key == "and" || key == "or" )
    {
        if ( !body.is_array() )
        {
            throw format_error( "\"" + key + "\" takes an array" );
        }
        std::vector<counting_constraint> parts;
        for ( const auto& p : body )
        {
            parts.push_back( constraint_from_json( p ) );
        }
        return key == "and" ? counting_constraint::all_of( std::move( parts ) )
                            : counting_constraint::any_of( std::move( parts ) );
    }
    if ( key == "not" )
    {
        return counting_constraint::negation( constraint_from_json( body ) );
    }
    if ( key == "ineq" )
    {
        if ( !body.is_object() || !body.contains( "coefs" ) || !body["coefs"].is_object() )
        {
            throw format_error( "ineq needs {\"coefs\": {letter: int, ...}, \"const\": int}" );
        }
        for ( const auto& item : body.items() )
        {
            if ( item.key() != "coefs" && item.key() != "const" )
            {
                throw format_error( "ineq: unknown field '" + item.key() + "'" );
            }
        }
        std::vector<std::pair<char, std::int64_t>> coefs;
        for ( const auto& item : body["coefs"].items() )
        {
            coefs.emplace_back( read_letter( item.key() ), read_int( item.value(), "coefficient" ) );
        }
        const std::int64_t constant = body.contains( "const" ) ? read_int( body["const"], "const" ) : 0;
        return counting_constraint::inequality( std::move( coefs ), constant );
    }
    if ( key == "cong" )
    {
        if ( !body.is_object() || !body.contains( "letter" ) || !body.contains( "mod" ) || !body["letter"].is_string() )
        {
            throw format_error( "cong needs {\"letter\": \"a\", \"mod\": c, \"res\": k}" );
        }
        for ( const auto& item : body.items() )
        {
            if ( item.key() != "letter" && item.key() != "mod" && item.key() != "res" )
            {
                throw format_error( "cong: unknown field '" + item.key() + "'" );
            }
        }
        const char letter = read_letter( body["letter"].get<std::string>() );
        const std::int64_t mod = read_int( body["mod"], "mod" );
        const std::int64_t res = body.contains( "res" ) ? read_int( body["res"], "res" ) : 0;
        return domain_as_format( [&] { return counting_constraint::congruence( letter, mod, res ); } );
    }
    throw format_error( "unknown constraint node \"" + key + "\"" );
}

ordered_json to_json( const linear_set& s )
{
    return ordered_json{ { "base", s.base() }, { "periods", s.periods() } };
}

ordered_json to_json( const counting_constraint& c )
{
    using kind = counting_constraint::kind;
    switch ( c.type() )
    {
    case kind::conjunction:
    case kind::disjunction:
    {
        ordered_json parts = ordered_json::array();
        for ( const auto& p : c.parts() )
        {
            parts.push_back( to_json( p ) );
        }
        return ordered_json{ { c.type() == kind::conjunction ? "and" : "or", std::move( parts ) } };
    }
    case kind::negation: return ordered_json{ { "not", to_json( c.parts().front() ) } };
    case kind::inequality:
    {
        ordered_json coefs = ordered_json::object();
        for ( const auto& [letter, coef] : c.coefs() )
        {
            coefs[std::string( 1, letter )] = coef;
        }
        return ordered_json{ { "ineq", ordered_json{ { "coefs", std::move( coefs ) }, { "const", c.constant() } } } };
    }
    case kind::congruence:
        return ordered_json{
            { "cong", ordered_json{ { "letter", std::string( 1, c.letter() ) }, { "mod", c.modulus() }, { "res", c.residue() } } } };
    }
    return {};
}

} // namespace hac
