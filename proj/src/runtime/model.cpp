#include "hac/model.hpp"

#include <algorithm>
#include <cstdlib>

#include "hac/error.hpp"

namespace hac
{

affine_map::affine_map( std::size_t rows, std::size_t cols ) : _cols{ cols }, _rows( rows ), _bias( rows ) {}

affine_map affine_map::from_dense( const std::vector<std::vector<rational>>& matrix, std::vector<rational> bias,
                                   std::size_t cols )
{
    if ( matrix.size() != bias.size() )
    {
        throw model_error( "affine map has " + std::to_string( matrix.size() ) + " rows but " +
                           std::to_string( bias.size() ) + " bias entries" );
    }
    affine_map m( matrix.size(), cols );
    for ( std::size_t r = 0; r < matrix.size(); ++r )
    {
        if ( matrix[r].size() != cols )
        {
            throw model_error( "affine map row " + std::to_string( r ) + " has " + std::to_string( matrix[r].size() ) +
                               " entries, expected " + std::to_string( cols ) );
        }
        for ( std::size_t c = 0; c < cols; ++c )
        {
            if ( !matrix[r][c].is_zero() )
            {
                m._rows[r].emplace_back( c, matrix[r][c] );
            }
        }
    }
    m._bias = std::move( bias );
    return m;
}

rational affine_map::at( std::size_t r, std::size_t c ) const
{
    if ( c >= _cols )
    {
        throw model_error( "affine map column out of range" );
    }
    const auto& row = _rows.at( r );
    auto it = std::lower_bound( row.begin(), row.end(), c, []( const entry& e, std::size_t col ) { return e.first < col; } );
    return it != row.end() && it->first == c ? it->second : rational{};
}

void affine_map::set( std::size_t r, std::size_t c, const rational& value )
{
    if ( c >= _cols )
    {
        throw model_error( "affine map column out of range" );
    }
    auto& row = _rows.at( r );
    auto it = std::lower_bound( row.begin(), row.end(), c, []( const entry& e, std::size_t col ) { return e.first < col; } );
    if ( it != row.end() && it->first == c )
    {
        if ( value.is_zero() )
        {
            row.erase( it );
        }
        else
        {
            it->second = value;
        }
    }
    else if ( !value.is_zero() )
    {
        row.emplace( it, c, value );
    }
}

void affine_map::add( std::size_t r, std::size_t c, const rational& value )
{
    set( r, c, at( r, c ) + value );
}

void affine_map::set_bias( std::size_t r, const rational& value )
{
    _bias.at( r ) = value;
}

std::size_t affine_map::add_row()
{
    _rows.emplace_back();
    _bias.emplace_back();
    return _rows.size() - 1;
}

bool affine_map::is_zero() const
{
    for ( std::size_t r = 0; r < _rows.size(); ++r )
    {
        if ( !row_is_zero( r ) )
        {
            return false;
        }
    }
    return true;
}

scalar affine_map::apply_row( std::size_t r, const std::vector<scalar>& x ) const
{
    scalar out{ _bias[r] };
    for ( const auto& [c, value] : _rows[r] )
    {
        if ( !x[c].is_zero() )
        {
            out += x[c] * value;
        }
    }
    return out;
}

std::vector<scalar> affine_map::apply( const std::vector<scalar>& x ) const
{
    if ( x.size() != _cols )
    {
        throw model_error( "affine map expects width " + std::to_string( _cols ) + ", got " + std::to_string( x.size() ) );
    }
    std::vector<scalar> out;
    out.reserve( _rows.size() );
    for ( std::size_t r = 0; r < _rows.size(); ++r )
    {
        out.push_back( apply_row( r, x ) );
    }
    return out;
}

scalar positional_component::eval( std::int64_t n, std::int64_t i ) const
{
    switch ( kind )
    {
    case positional_kind::index: return scalar{ i };
    case positional_kind::index_squared: return scalar{ rational{ i } * rational{ i } };
    case positional_kind::inv_index: return scalar{ rational{ 1, i + 1 } };
    case positional_kind::alt_sign: return scalar{ i % 2 == 0 ? 1 : -1 };
    case positional_kind::cos_geo:
        return scalar::cos_pi( ( rational{ 1 } - rational::pow2( -static_cast<int>( i ) ) ) * rational{ 1, 10 } );
    case positional_kind::sin_geo:
        return scalar::sin_pi( ( rational{ 1 } - rational::pow2( -static_cast<int>( i ) ) ) * rational{ 1, 10 } );
    case positional_kind::pred: return scalar{ predicate->eval( n, i ) ? 1 : 0 };
    case positional_kind::pred_at_n: return scalar{ predicate->eval( n, n ) ? 1 : 0 };
    }
    return {};
}

std::string positional_component::str() const
{
    switch ( kind )
    {
    case positional_kind::index: return "index";
    case positional_kind::index_squared: return "index_squared";
    case positional_kind::inv_index: return "inv_index";
    case positional_kind::alt_sign: return "alt_sign";
    case positional_kind::cos_geo: return "cos_geo";
    case positional_kind::sin_geo: return "sin_geo";
    case positional_kind::pred: return "pred(" + predicate->str() + ")";
    case positional_kind::pred_at_n: return "pred_at_n(" + predicate->str() + ")";
    }
    return {};
}

bool operator==( const positional_component& a, const positional_component& b )
{
    if ( a.kind != b.kind || a.predicate.has_value() != b.predicate.has_value() )
    {
        return false;
    }
    return !a.predicate || *a.predicate == *b.predicate;
}

mpfr_prec_t precision_policy::floor_bits()
{
    mpfr_prec_t floor = 64;
    if ( const char* env = std::getenv( "HAC_PRECISION_BITS" ) )
    {
        char* end = nullptr;
        const long value = std::strtol( env, &end, 10 );
        if ( end != env && *end == '\0' && value > floor )
        {
            floor = std::min<long>( value, 1L << 24 );
        }
    }
    return floor;
}

mpfr_prec_t precision_policy::bits( std::size_t n ) const
{
    const std::int64_t law = a * static_cast<std::int64_t>( n ) + b;
    return std::max<std::int64_t>( law, floor_bits() );
}

std::string to_string( numeric_mode mode )
{
    return mode == numeric_mode::exact ? "exact-rational" : "bigfloat";
}

numeric_mode parse_mode( const std::string& text )
{
    if ( text == "bigfloat" )
    {
        return numeric_mode::bigfloat;
    }
    if ( text == "exact" || text == "exact-rational" )
    {
        return numeric_mode::exact;
    }
    throw format_error( "unknown precision mode '" + text + "' (expected bigfloat or exact)" );
}

encoder_model::encoder_model( hac::alphabet sigma, std::vector<positional_component> positional,
                              std::vector<layer> layers, std::vector<rational> acceptance, precision_policy precision,
                              nlohmann::ordered_json metadata )
    : _alphabet{ std::move( sigma ) }
    , _positional{ std::move( positional ) }
    , _layers{ std::move( layers ) }
    , _acceptance{ std::move( acceptance ) }
    , _precision{ precision }
    , _metadata( std::move( metadata ) )
{
    for ( const auto& p : _positional )
    {
        const bool needs_predicate = p.kind == positional_kind::pred || p.kind == positional_kind::pred_at_n;
        if ( needs_predicate != p.predicate.has_value() )
        {
            throw model_error( "positional component " + std::to_string( static_cast<int>( p.kind ) ) +
                               ( needs_predicate ? " needs" : " must not have" ) + " a predicate" );
        }
    }
    if ( _precision.mode == numeric_mode::exact && uses_transcendentals() )
    {
        throw model_error( "exact-rational mode cannot evaluate cos_geo/sin_geo components" );
    }
    if ( _precision.a < 0 )
    {
        throw model_error( "precision slope must be non-negative" );
    }

    std::size_t width = input_width();
    _widths.push_back( width );
    for ( std::size_t k = 0; k < _layers.size(); ++k )
    {
        const std::string where = "layer " + std::to_string( k + 1 ) + ": ";
        if ( const auto* attn = std::get_if<attention_layer>( &_layers[k] ) )
        {
            if ( attn->A.rows() != width || attn->A.cols() != width || attn->B.rows() != width || attn->B.cols() != width )
            {
                throw model_error( where + "A and B must map " + std::to_string( width ) + " -> " + std::to_string( width ) );
            }
            if ( attn->C.cols() != 2 * width )
            {
                throw model_error( where + "C must take " + std::to_string( 2 * width ) + " inputs, has " +
                                   std::to_string( attn->C.cols() ) );
            }
            if ( attn->C.rows() == 0 )
            {
                throw model_error( where + "C has no output rows" );
            }
            width = attn->C.rows();
        }
        else
        {
            const auto& relu = std::get<relu_layer>( _layers[k] );
            if ( relu.coord < 1 || relu.coord > width )
            {
                throw model_error( where + "relu coordinate " + std::to_string( relu.coord ) + " outside 1.." +
                                   std::to_string( width ) );
            }
        }
        _widths.push_back( width );
    }
    if ( _acceptance.size() != width )
    {
        throw model_error( "acceptance vector has " + std::to_string( _acceptance.size() ) + " entries, output width is " +
                           std::to_string( width ) );
    }
}

bool encoder_model::uses_transcendentals() const
{
    return std::any_of( _positional.begin(), _positional.end(), []( const auto& p ) { return p.is_transcendental(); } );
}

encoder_model encoder_model::with_precision( precision_policy precision ) const
{
    return encoder_model{ _alphabet, _positional, _layers, _acceptance, precision, _metadata };
}

encoder_model encoder_model::with_acceptance( std::vector<rational> acceptance ) const
{
    return encoder_model{ _alphabet, _positional, _layers, std::move( acceptance ), _precision, _metadata };
}

bool operator==( const encoder_model& a, const encoder_model& b )
{
    return a._alphabet == b._alphabet && a._positional == b._positional && a._layers == b._layers &&
           a._acceptance == b._acceptance && a._precision == b._precision && a._metadata == b._metadata;
}

} // namespace hac
