#include "hac/predicate.hpp"

#include "hac/error.hpp"

namespace hac
{

void bit_table::validate() const
{
    if ( name.empty() )
    {
        throw domain_error( "table predicate without a name" );
    }
    for ( std::size_t k = 0; k < rows.size(); ++k )
    {
        const auto& row = rows[k];
        if ( row.size() != k + 2 )
        {
            throw domain_error( "table '" + name + "': row for n=" + std::to_string( k + 1 ) + " must have " +
                                std::to_string( k + 2 ) + " entries" );
        }
        if ( row.find_first_not_of( "01" ) != std::string::npos )
        {
            throw domain_error( "table '" + name + "': rows must consist of 0/1" );
        }
    }
}

bool is_prime( std::int64_t k )
{
    if ( k < 2 )
    {
        return false;
    }
    for ( std::int64_t d = 2; d * d <= k; ++d )
    {
        if ( k % d == 0 )
        {
            return false;
        }
    }
    return true;
}

unary_predicate::unary_predicate( predicate_kind kind, std::vector<std::int64_t> params )
    : _kind{ kind }, _params{ std::move( params ) }
{
}

unary_predicate unary_predicate::even()
{
    return unary_predicate{ predicate_kind::even, {} };
}

unary_predicate unary_predicate::mod( std::int64_t p, std::int64_t r )
{
    if ( p < 1 || r < 0 || r >= p )
    {
        throw domain_error( "mod(p,r) needs p >= 1 and 0 <= r < p, got mod(" + std::to_string( p ) + "," +
                            std::to_string( r ) + ")" );
    }
    return unary_predicate{ predicate_kind::mod, { p, r } };
}

unary_predicate unary_predicate::eq( std::int64_t c )
{
    return unary_predicate{ predicate_kind::eq, { c } };
}

unary_predicate unary_predicate::geq( std::int64_t c )
{
    return unary_predicate{ predicate_kind::geq, { c } };
}

unary_predicate unary_predicate::midpoint()
{
    return unary_predicate{ predicate_kind::midpoint, {} };
}

unary_predicate unary_predicate::prime_shift()
{
    return unary_predicate{ predicate_kind::prime_shift, {} };
}

unary_predicate unary_predicate::table( std::shared_ptr<const bit_table> data )
{
    if ( !data )
    {
        throw domain_error( "table predicate without data" );
    }
    data->validate();
    unary_predicate p{ predicate_kind::table, {} };
    p._table = std::move( data );
    return p;
}

std::string unary_predicate::name() const
{
    switch ( _kind )
    {
    case predicate_kind::even: return "even";
    case predicate_kind::mod: return "mod";
    case predicate_kind::eq: return "eq";
    case predicate_kind::geq: return "geq";
    case predicate_kind::midpoint: return "midpoint";
    case predicate_kind::prime_shift: return "primeshift";
    case predicate_kind::table: return "table";
    }
    return {};
}

bool unary_predicate::eval( std::int64_t n, std::int64_t i ) const
{
    if ( n < 1 || i < 0 || i > n )
    {
        throw domain_error( str() + " evaluated outside its domain: n=" + std::to_string( n ) +
                            ", i=" + std::to_string( i ) );
    }
    switch ( _kind )
    {
    case predicate_kind::even: return i % 2 == 0;
    case predicate_kind::mod: return i % _params[0] == _params[1];
    case predicate_kind::eq: return i == _params[0];
    case predicate_kind::geq: return i >= _params[0];
    case predicate_kind::midpoint: return n % 2 == 0 && i == n / 2 - 1;
    case predicate_kind::prime_shift: return is_prime( i + 1 );
    case predicate_kind::table:
        if ( static_cast<std::size_t>( n ) > _table->bound() )
        {
            throw domain_error( "table '" + _table->name + "' has no row for n=" + std::to_string( n ) +
                                " (bound " + std::to_string( _table->bound() ) + ")" );
        }
        return _table->rows[static_cast<std::size_t>( n - 1 )][static_cast<std::size_t>( i )] == '1';
    }
    return false;
}

std::string unary_predicate::str() const
{
    std::string out = "@" + name();
    if ( _kind == predicate_kind::table )
    {
        return out + "(" + _table->name + ")";
    }
    if ( !_params.empty() )
    {
        out += "(";
        for ( std::size_t k = 0; k < _params.size(); ++k )
        {
            out += ( k ? "," : "" ) + std::to_string( _params[k] );
        }
        out += ")";
    }
    return out;
}

bool operator==( const unary_predicate& a, const unary_predicate& b )
{
    if ( a._kind != b._kind || a._params != b._params )
    {
        return false;
    }
    if ( a._kind == predicate_kind::table )
    {
        return a._table->name == b._table->name && a._table->rows == b._table->rows;
    }
    return true;
}

void table_registry::add( bit_table table )
{
    table.validate();
    auto name = table.name;
    _tables[name] = std::make_shared<const bit_table>( std::move( table ) );
}

std::shared_ptr<const bit_table> table_registry::find( const std::string& name ) const
{
    auto it = _tables.find( name );
    return it == _tables.end() ? nullptr : it->second;
}

unary_predicate make_predicate( const std::string& name, const std::vector<std::int64_t>& params )
{
    auto arity = [&]( std::size_t expected ) {
        if ( params.size() != expected )
        {
            throw domain_error( "predicate '" + name + "' takes " + std::to_string( expected ) + " parameter(s), got " +
                                std::to_string( params.size() ) );
        }
    };
    if ( name == "even" )
    {
        arity( 0 );
        return unary_predicate::even();
    }
    if ( name == "mod" )
    {
        arity( 2 );
        return unary_predicate::mod( params[0], params[1] );
    }
    if ( name == "eq" )
    {
        arity( 1 );
        return unary_predicate::eq( params[0] );
    }
    if ( name == "geq" )
    {
        arity( 1 );
        return unary_predicate::geq( params[0] );
    }
    if ( name == "midpoint" )
    {
        arity( 0 );
        return unary_predicate::midpoint();
    }
    if ( name == "primeshift" )
    {
        arity( 0 );
        return unary_predicate::prime_shift();
    }
    throw domain_error( "unknown predicate '" + name + "'" );
}

} // namespace hac
