#include "hac/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hac/error.hpp"

namespace hac
{

using nlohmann::ordered_json;

namespace
{

void only_fields( const ordered_json& obj, std::initializer_list<const char*> allowed, const std::string& where )
{
    if ( !obj.is_object() )
    {
        throw format_error( where + ": expected an object" );
    }
    const std::set<std::string> names( allowed.begin(), allowed.end() );
    for ( const auto& item : obj.items() )
    {
        if ( !names.count( item.key() ) )
        {
            throw format_error( where + ": unknown field '" + item.key() + "'" );
        }
    }
}

const ordered_json& field( const ordered_json& obj, const char* name, const std::string& where )
{
    auto it = obj.find( name );
    if ( it == obj.end() )
    {
        throw format_error( where + ": missing field '" + name + "'" );
    }
    return *it;
}

rational read_rational( const ordered_json& value, const std::string& where )
{
    if ( value.is_string() )
    {
        try
        {
            return rational::parse( value.get<std::string>() );
        }
        catch ( const error& e )
        {
            throw format_error( where + ": " + e.what() );
        }
    }
    if ( value.is_number_integer() )
    {
        return rational{ value.get<std::int64_t>() };
    }
    throw format_error( where + ": expected a rational string" );
}

std::int64_t read_int( const ordered_json& value, const std::string& where )
{
    if ( !value.is_number_integer() )
    {
        throw format_error( where + ": expected an integer" );
    }
    return value.get<std::int64_t>();
}

ordered_json write_affine( const affine_map& m )
{
    ordered_json matrix = ordered_json::array();
    ordered_json bias = ordered_json::array();
    for ( std::size_t r = 0; r < m.rows(); ++r )
    {
        std::vector<std::string> row( m.cols(), "0" );
        for ( const auto& [c, value] : m.row( r ) )
        {
            row[c] = value.str();
        }
        matrix.push_back( row );
        bias.push_back( m.bias( r ).str() );
    }
    return ordered_json{ { "matrix", std::move( matrix ) }, { "bias", std::move( bias ) } };
}

affine_map read_affine( const ordered_json& doc, std::size_t rows, std::size_t cols, const std::string& where )
{
    only_fields( doc, { "matrix", "bias" }, where );
    const auto& matrix = field( doc, "matrix", where );
    const auto& bias = field( doc, "bias", where );
    if ( !matrix.is_array() || !bias.is_array() )
    {
        throw format_error( where + ": matrix and bias must be arrays" );
    }
    if ( matrix.size() != bias.size() )
    {
        throw format_error( where + ": matrix has " + std::to_string( matrix.size() ) + " rows, bias has " +
                            std::to_string( bias.size() ) );
    }
    if ( rows != 0 && matrix.size() != rows )
    {
        throw format_error( where + ": expected " + std::to_string( rows ) + " rows, found " +
                            std::to_string( matrix.size() ) );
    }
    affine_map m( matrix.size(), cols );
    for ( std::size_t r = 0; r < matrix.size(); ++r )
    {
        const std::string at = where + " row " + std::to_string( r );
        if ( !matrix[r].is_array() || matrix[r].size() != cols )
        {
            throw format_error( at + ": expected " + std::to_string( cols ) + " entries" );
        }
        for ( std::size_t c = 0; c < cols; ++c )
        {
            m.set( r, c, read_rational( matrix[r][c], at ) );
        }
        m.set_bias( r, read_rational( bias[r], at + " bias" ) );
    }
    return m;
}

ordered_json write_predicate( const unary_predicate& p )
{
    ordered_json out{ { "name", p.name() }, { "params", p.params() } };
    if ( p.kind() == predicate_kind::table )
    {
        out["table"] = ordered_json{ { "name", p.table_data()->name }, { "rows", p.table_data()->rows } };
    }
    return out;
}

unary_predicate read_predicate( const ordered_json& doc, const std::string& where )
{
    only_fields( doc, { "name", "params", "table" }, where );
    const auto& name = field( doc, "name", where );
    if ( !name.is_string() )
    {
        throw format_error( where + ": predicate name must be a string" );
    }
    std::vector<std::int64_t> params;
    if ( auto it = doc.find( "params" ); it != doc.end() )
    {
        if ( !it->is_array() )
        {
            throw format_error( where + ": params must be an array" );
        }
        for ( const auto& p : *it )
        {
            params.push_back( read_int( p, where + " params" ) );
        }
    }
    try
    {
        if ( name.get<std::string>() == "table" )
        {
            const auto& table = field( doc, "table", where );
            only_fields( table, { "name", "rows" }, where + " table" );
            auto data = std::make_shared<bit_table>();
            data->name = field( table, "name", where ).get<std::string>();
            data->rows = field( table, "rows", where ).get<std::vector<std::string>>();
            data->validate();
            return unary_predicate::table( data );
        }
        if ( doc.contains( "table" ) )
        {
            throw format_error( where + ": only table predicates carry a table" );
        }
        return make_predicate( name.get<std::string>(), params );
    }
    catch ( const nlohmann::json::exception& e )
    {
        throw format_error( where + ": " + e.what() );
    }
    catch ( const domain_error& e )
    {
        throw format_error( where + ": " + e.what() );
    }
}

ordered_json write_positional( const positional_component& p )
{
    switch ( p.kind )
    {
    case positional_kind::pred: return ordered_json{ { "pred", write_predicate( *p.predicate ) } };
    case positional_kind::pred_at_n: return ordered_json{ { "pred_at_n", write_predicate( *p.predicate ) } };
    default: return p.str();
    }
}

positional_component read_positional( const ordered_json& doc, const std::string& where )
{
    if ( doc.is_string() )
    {
        static const std::pair<const char*, positional_kind> names[] = {
            { "index", positional_kind::index },         { "index_squared", positional_kind::index_squared },
            { "inv_index", positional_kind::inv_index }, { "alt_sign", positional_kind::alt_sign },
            { "cos_geo", positional_kind::cos_geo },     { "sin_geo", positional_kind::sin_geo } };
        for ( const auto& [name, kind] : names )
        {
            if ( doc.get<std::string>() == name )
            {
                return positional_component::of( kind );
            }
        }
        throw format_error( where + ": unknown positional component '" + doc.get<std::string>() + "'" );
    }
    if ( doc.is_object() && doc.size() == 1 )
    {
        if ( doc.contains( "pred" ) )
        {
            return positional_component::pred( read_predicate( doc["pred"], where ) );
        }
        if ( doc.contains( "pred_at_n" ) )
        {
            return positional_component::pred_at_n( read_predicate( doc["pred_at_n"], where ) );
        }
    }
    throw format_error( where + ": expected a component name or {\"pred\": ...} / {\"pred_at_n\": ...}" );
}

ordered_json write_layer( const layer& l )
{
    if ( const auto* attn = std::get_if<attention_layer>( &l ) )
    {
        return ordered_json{ { "kind", "attention" },
                             { "A", write_affine( attn->A ) },
                             { "B", write_affine( attn->B ) },
                             { "C", write_affine( attn->C ) },
                             { "selector", attn->selector == selector::unique ? "unique" : "average" },
                             { "masked", attn->masked } };
    }
    return ordered_json{ { "kind", "relu" }, { "coord", std::get<relu_layer>( l ).coord } };
}

layer read_layer( const ordered_json& doc, std::size_t width, const std::string& where )
{
    if ( !doc.is_object() )
    {
        throw format_error( where + ": expected an object" );
    }
    const bool relu = doc.contains( "kind" ) && doc["kind"] == "relu";
    if ( relu )
    {
        only_fields( doc, { "kind", "coord" }, where );
        const std::int64_t coord = read_int( field( doc, "coord", where ), where + " coord" );
        if ( coord < 1 )
        {
            throw format_error( where + ": relu coord is 1-based" );
        }
        return relu_layer{ static_cast<std::size_t>( coord ) };
    }
    only_fields( doc, { "kind", "A", "B", "C", "selector", "masked" }, where );
    if ( doc.contains( "kind" ) && doc["kind"] != "attention" )
    {
        throw format_error( where + ": kind must be \"attention\" or \"relu\"" );
    }
    attention_layer attn;
    attn.A = read_affine( field( doc, "A", where ), width, width, where + " A" );
    attn.B = read_affine( field( doc, "B", where ), width, width, where + " B" );
    attn.C = read_affine( field( doc, "C", where ), 0, 2 * width, where + " C" );
    const auto& sel = field( doc, "selector", where );
    if ( sel == "unique" )
    {
        attn.selector = selector::unique;
    }
    else if ( sel == "average" )
    {
        attn.selector = selector::average;
    }
    else
    {
        throw format_error( where + ": selector must be \"unique\" or \"average\"" );
    }
    const auto& masked = field( doc, "masked", where );
    if ( !masked.is_boolean() )
    {
        throw format_error( where + ": masked must be a boolean" );
    }
    attn.masked = masked.get<bool>();
    return attn;
}

} // namespace

ordered_json model_to_json( const encoder_model& model )
{
    ordered_json doc;
    doc["alphabet"] = model.alphabet().symbols();
    doc["positional"] = ordered_json::array();
    for ( const auto& p : model.positional() )
    {
        doc["positional"].push_back( write_positional( p ) );
    }
    doc["layers"] = ordered_json::array();
    for ( const auto& l : model.layers() )
    {
        doc["layers"].push_back( write_layer( l ) );
    }
    doc["acceptance"] = ordered_json::array();
    for ( const auto& t : model.acceptance() )
    {
        doc["acceptance"].push_back( t.str() );
    }
    doc["precision"] = ordered_json{
        { "a", model.precision().a }, { "b", model.precision().b }, { "mode", to_string( model.precision().mode ) } };
    doc["metadata"] = model.metadata();
    return doc;
}

encoder_model model_from_json( const ordered_json& doc )
{
    only_fields( doc, { "alphabet", "positional", "layers", "acceptance", "precision", "metadata" }, "model" );
    const auto& sigma_doc = field( doc, "alphabet", "model" );
    if ( !sigma_doc.is_string() )
    {
        throw format_error( "model: alphabet must be a string" );
    }
    std::optional<alphabet> sigma;
    try
    {
        sigma.emplace( sigma_doc.get<std::string>() );
    }
    catch ( const domain_error& e )
    {
        throw format_error( std::string{ "model alphabet: " } + e.what() );
    }

    const auto& positional_doc = field( doc, "positional", "model" );
    if ( !positional_doc.is_array() )
    {
        throw format_error( "model: positional must be an array" );
    }
    std::vector<positional_component> positional;
    for ( std::size_t k = 0; k < positional_doc.size(); ++k )
    {
        positional.push_back( read_positional( positional_doc[k], "positional[" + std::to_string( k ) + "]" ) );
    }

    const auto& layers_doc = field( doc, "layers", "model" );
    if ( !layers_doc.is_array() )
    {
        throw format_error( "model: layers must be an array" );
    }
    std::vector<layer> layers;
    std::size_t width = sigma->size() + positional.size();
    for ( std::size_t k = 0; k < layers_doc.size(); ++k )
    {
        layers.push_back( read_layer( layers_doc[k], width, "layers[" + std::to_string( k ) + "]" ) );
        if ( const auto* attn = std::get_if<attention_layer>( &layers.back() ) )
        {
            width = attn->C.rows();
        }
    }

    const auto& t_doc = field( doc, "acceptance", "model" );
    if ( !t_doc.is_array() )
    {
        throw format_error( "model: acceptance must be an array" );
    }
    std::vector<rational> t;
    for ( const auto& x : t_doc )
    {
        t.push_back( read_rational( x, "acceptance" ) );
    }

    const auto& p_doc = field( doc, "precision", "model" );
    only_fields( p_doc, { "a", "b", "mode" }, "precision" );
    precision_policy precision;
    precision.a = read_int( field( p_doc, "a", "precision" ), "precision a" );
    precision.b = read_int( field( p_doc, "b", "precision" ), "precision b" );
    const auto& mode = field( p_doc, "mode", "precision" );
    if ( !mode.is_string() )
    {
        throw format_error( "precision: mode must be a string" );
    }
    precision.mode = parse_mode( mode.get<std::string>() );

    ordered_json metadata = doc.contains( "metadata" ) ? doc["metadata"] : ordered_json::object();
    try
    {
        return encoder_model{ *sigma, std::move( positional ), std::move( layers ), std::move( t ), precision,
                              std::move( metadata ) };
    }
    catch ( const model_error& e )
    {
        throw format_error( std::string{ "invalid model: " } + e.what() );
    }
}

std::string model_to_string( const encoder_model& model )
{
    return model_to_json( model ).dump() + "\n";
}

encoder_model model_from_string( const std::string& text )
{
    ordered_json doc;
    try
    {
        doc = ordered_json::parse( text );
    }
    catch ( const nlohmann::json::parse_error& e )
    {
        throw format_error( std::string{ "model document is not valid JSON: " } + e.what() );
    }
    return model_from_json( doc );
}

void save_model( const encoder_model& model, const std::filesystem::path& path )
{
    std::ofstream out( path );
    if ( !out )
    {
        throw format_error( "cannot write " + path.string() );
    }
    out << model_to_string( model );
    if ( !out )
    {
        throw format_error( "failed writing " + path.string() );
    }
}

encoder_model load_model( const std::filesystem::path& path )
{
    std::ifstream in( path );
    if ( !in )
    {
        throw format_error( "cannot read " + path.string() );
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return model_from_string( buffer.str() );
}

} // namespace hac
