#include "hac/compiler.hpp"

#include <algorithm>
#include <map>

#include "hac/error.hpp"

namespace hac
{

using nlohmann::ordered_json;

namespace
{

using term_list = std::vector<std::pair<std::size_t, rational>>;

// One new output row of C: sum over v-coordinates, sum over attended coordinates, bias.
struct row_spec
{
    term_list own;
    term_list attended;
    rational bias;
};

struct requirements
{
    bool index = false, index_squared = false, inv_index = false, alt_sign = false, cos_geo = false, sin_geo = false;
    std::vector<positional_component> predicates;

    void add_predicate( positional_component p )
    {
        if ( std::find( predicates.begin(), predicates.end(), p ) == predicates.end() )
        {
            predicates.push_back( std::move( p ) );
        }
    }

    void zero_last() { index = inv_index = true; }
    void count( count_direction ) { index = index_squared = inv_index = true; }

    void visit( const formula& f )
    {
        for ( std::size_t k = 0; k < f.arity(); ++k )
        {
            visit( f.child( k ) );
        }
        for ( const auto& t : f.terms() )
        {
            visit( t.operand );
            count( t.direction );
        }
        switch ( f.kind() )
        {
        case formula_kind::next:
            alt_sign = cos_geo = sin_geo = true;
            zero_last();
            break;
        case formula_kind::until:
            cos_geo = sin_geo = true;
            zero_last();
            break;
        case formula_kind::pred: add_predicate( positional_component::pred( f.predicate() ) ); break;
        case formula_kind::pred_of_count:
            count( f.direction() );
            add_predicate( positional_component::pred( f.predicate() ) );
            add_predicate( positional_component::pred_at_n( f.predicate() ) );
            break;
        default: break;
        }
    }

    [[nodiscard]] std::vector<positional_component> components() const
    {
        std::vector<positional_component> out;
        const std::pair<bool, positional_kind> fixed[] = {
            { index, positional_kind::index },       { index_squared, positional_kind::index_squared },
            { inv_index, positional_kind::inv_index }, { alt_sign, positional_kind::alt_sign },
            { cos_geo, positional_kind::cos_geo },   { sin_geo, positional_kind::sin_geo } };
        for ( const auto& [needed, kind] : fixed )
        {
            if ( needed )
            {
                out.push_back( positional_component::of( kind ) );
            }
        }
        out.insert( out.end(), predicates.begin(), predicates.end() );
        return out;
    }
};

std::string fragment_name( fragment f )
{
    return f == fragment::mon ? "mon" : "cplus";
}

class gadget_compiler
{
public:
    gadget_compiler( const hac::alphabet& sigma, std::vector<positional_component> positional, fragment kind )
        : _sigma{ sigma }
        , _positional{ std::move( positional ) }
        , _kind{ kind }
        , _selector{ kind == fragment::mon ? selector::unique : selector::average }
        , _width{ sigma.size() + _positional.size() }
    {
    }

    std::size_t compile( const formula& f )
    {
        const std::string key = f.str();
        if ( auto it = _coords.find( key ); it != _coords.end() )
        {
            return it->second;
        }
        const std::size_t coord = build( f, key );
        _coords.emplace( key, coord );
        _ledger.push_back( ledger_entry{ key, coord, _layers.size() } );
        return coord;
    }

    // 2 x - 1 into a fresh coordinate.
    std::size_t output( std::size_t root, const std::string& text )
    {
        return affine( { row_spec{ { { root, 2 } }, {}, -1 } }, "accept", "output", text );
    }

    [[nodiscard]] std::size_t width() const { return _width; }
    std::vector<layer>& layers() { return _layers; }
    const std::vector<ledger_entry>& ledger() const { return _ledger; }
    ordered_json& tags() { return _tags; }

private:
    std::size_t positional( positional_kind kind, const std::optional<unary_predicate>& p = std::nullopt ) const
    {
        for ( std::size_t k = 0; k < _positional.size(); ++k )
        {
            if ( _positional[k].kind == kind && ( !p || *_positional[k].predicate == *p ) )
            {
                return _sigma.size() + k;
            }
        }
        throw model_error( "internal: positional component missing" );
    }

    attention_layer open() const
    {
        attention_layer l;
        l.A = affine_map( _width, _width );
        l.B = affine_map( _width, _width );
        l.C = affine_map( _width, 2 * _width );
        for ( std::size_t k = 0; k < _width; ++k )
        {
            l.C.set( k, k, 1 );
        }
        l.selector = _selector;
        return l;
    }

    std::size_t add_row( attention_layer& l, const row_spec& spec ) const
    {
        const std::size_t r = l.C.add_row();
        for ( const auto& [c, v] : spec.own )
        {
            l.C.add( r, c, v );
        }
        for ( const auto& [c, v] : spec.attended )
        {
            l.C.add( r, _width + c, v );
        }
        l.C.set_bias( r, spec.bias );
        return r;
    }

    void emit( layer l, const std::string& gadget, const std::string& step, const std::string& subformula )
    {
        if ( auto* attn = std::get_if<attention_layer>( &l ) )
        {
            _width = attn->C.rows();
        }
        _layers.push_back( std::move( l ) );
        _tags.push_back( ordered_json{ { "gadget", gadget }, { "step", step }, { "subformula", subformula } } );
    }

    // Appends the rows in one attention-free stage; returns the first new coordinate.
    std::size_t affine( const std::vector<row_spec>& rows, const std::string& gadget, const std::string& step,
                        const std::string& subformula )
    {
        attention_layer l = open();
        const std::size_t first = _width;
        for ( const auto& r : rows )
        {
            add_row( l, r );
        }
        emit( std::move( l ), gadget, step, subformula );
        return first;
    }

    void relu( std::size_t coord, const std::string& gadget, const std::string& subformula )
    {
        emit( relu_layer{ coord + 1 }, gadget, "relu", subformula );
    }

    std::size_t one( const std::string& subformula )
    {
        if ( !_one )
        {
            _one = affine( { row_spec{ {}, {}, 1 } }, "true", "constant", subformula );
        }
        return *_one;
    }

    std::size_t gadget_not( std::size_t x, const std::string& text )
    {
        return affine( { row_spec{ { { x, -1 } }, {}, 1 } }, "not", "affine", text );
    }

    // relu(x + y - 1)
    std::size_t gadget_and( std::size_t x, std::size_t y, const std::string& text )
    {
        const std::size_t s = affine( { row_spec{ { { x, 1 }, { y, 1 } }, {}, -1 } }, "and", "affine", text );
        relu( s, "and", text );
        return s;
    }

    // (max(2x - 1, 2y - 1) + 1) / 2 = relu(2x - 2y) / 2 + y
    std::size_t gadget_or( std::size_t x, std::size_t y, const std::string& text )
    {
        const std::size_t s = affine( { row_spec{ { { x, 2 }, { y, -2 } }, {}, 0 } }, "or", "difference", text );
        relu( s, "or", text );
        return affine( { row_spec{ { { s, rational{ 1, 2 } }, { y, 1 } }, {}, 0 } }, "or", "recombine", text );
    }

    // Every position receives `coord` at position n-1: score -1/((i+1)(j+1)).
    std::size_t broadcast_last( std::size_t coord, const std::string& text )
    {
        attention_layer l = open();
        const std::size_t inv = positional( positional_kind::inv_index );
        l.A.set( inv, inv, -1 );
        l.B.set( inv, inv, 1 );
        const std::size_t out = _width;
        add_row( l, row_spec{ {}, { { coord, 1 } }, 0 } );
        emit( std::move( l ), "broadcast_last", "attention", text );
        return out;
    }

    std::size_t last_index( const std::string& text )
    {
        if ( !_last_index )
        {
            _last_index = broadcast_last( positional( positional_kind::index ), text );
        }
        return *_last_index;
    }

    // x_i - max(0, x_i + i - (n - 1))
    std::size_t zero_last( std::size_t x, const std::string& text )
    {
        const std::size_t last = last_index( text );
        const std::size_t index = positional( positional_kind::index );
        const std::size_t s =
            affine( { row_spec{ { { x, 1 }, { index, 1 }, { last, -1 } }, {}, 0 } }, "zero_last", "excess", text );
        relu( s, "zero_last", text );
        return affine( { row_spec{ { { x, 1 }, { s, -1 } }, {}, 0 } }, "zero_last", "subtract", text );
    }

    // Score cos(theta_i - theta_j) + (-1)^(i+j+1) 10 peaks at j = i + 1.
    std::size_t gadget_next( std::size_t x, const std::string& text )
    {
        attention_layer l = open();
        const std::size_t c = positional( positional_kind::cos_geo );
        const std::size_t s = positional( positional_kind::sin_geo );
        const std::size_t alt = positional( positional_kind::alt_sign );
        l.A.set( c, c, 1 );
        l.A.set( s, s, 1 );
        l.A.set( alt, alt, -10 );
        l.B.set( c, c, 1 );
        l.B.set( s, s, 1 );
        l.B.set( alt, alt, 1 );
        const std::size_t pulled = _width;
        add_row( l, row_spec{ {}, { { x, 1 } }, 0 } );
        emit( std::move( l ), "next", "attention", text );
        return zero_last( pulled, text );
    }

    // Fires at chi = !phi' | psi (phi' = phi with the last position zeroed);
    // score cos(theta_i - theta_j) - 10 (1 - chi_j) peaks at the first firing j >= i.
    std::size_t gadget_until( std::size_t phi, std::size_t psi, const std::string& text )
    {
        const std::size_t trimmed = zero_last( phi, text );
        const std::size_t stop = gadget_not( trimmed, text );
        const std::size_t chi = gadget_or( stop, psi, text );

        attention_layer l = open();
        const std::size_t c = positional( positional_kind::cos_geo );
        const std::size_t s = positional( positional_kind::sin_geo );
        l.A.set( c, c, 1 );
        l.A.set( s, s, 1 );
        l.A.set_bias( chi, 1 );
        l.B.set( c, c, 1 );
        l.B.set( s, s, 1 );
        l.B.set( chi, chi, 10 );
        l.B.set_bias( chi, -10 );
        const std::size_t out = _width;
        add_row( l, row_spec{ {}, { { psi, 1 } }, 0 } );
        emit( std::move( l ), "until", "attention", text );
        return out;
    }

    struct count_coords
    {
        std::size_t d;     // count_left - x
        std::size_t count; // count_left
    };

    count_coords count_left( std::size_t x, const std::string& operand )
    {
        if ( auto it = _left_counts.find( operand ); it != _left_counts.end() )
        {
            return it->second;
        }
        const std::string text = "<-#" + operand;
        const std::size_t index = positional( positional_kind::index );
        const std::size_t index_sq = positional( positional_kind::index_squared );
        const std::size_t inv = positional( positional_kind::inv_index );

        // y_i = (x_0 + ... + x_i) / (i + 1)
        attention_layer mean = open();
        mean.selector = selector::average;
        mean.masked = true;
        const std::size_t y = _width;
        add_row( mean, row_spec{ {}, { { x, 1 } }, 0 } );
        emit( std::move( mean ), "prefix_mean", "attention", text );

        // z_i = y_i - min(x_i, 1/(i+1)) with min(a, b) = a - max(0, a - b)
        const std::size_t t = affine( { row_spec{ { { x, 1 }, { inv, -1 } }, {}, 0 } }, "count", "excess", text );
        relu( t, "count", text );
        const std::size_t z = affine( { row_spec{ { { y, 1 }, { x, -1 }, { t, 1 } }, {}, 0 } }, "count", "z", text );

        // 2 j z_i - j^2 / (i + 1) peaks at j = (i + 1) z_i = d_i
        attention_layer l = open();
        l.selector = _selector;
        l.A.set( z, z, 2 );
        l.B.set( z, index, 1 );
        l.A.set( inv, inv, -1 );
        l.B.set( inv, index_sq, 1 );
        const std::size_t d = _width;
        add_row( l, row_spec{ {}, { { index, 1 } }, 0 } );
        emit( std::move( l ), "count", "attention", text );

        const std::size_t count = affine( { row_spec{ { { d, 1 }, { x, 1 } }, {}, 0 } }, "count", "total", text );
        const count_coords out{ d, count };
        _left_counts.emplace( operand, out );
        return out;
    }

    std::size_t count( count_direction direction, const formula& operand )
    {
        const std::string text = operand.str();
        const std::size_t x = compile( operand );
        const count_coords left = count_left( x, text );
        if ( direction == count_direction::left )
        {
            return left.count;
        }
        if ( auto it = _right_counts.find( text ); it != _right_counts.end() )
        {
            return it->second;
        }
        // #->phi(i) = #<-phi(n-1) - d_i
        const std::string label = "->#" + text;
        const std::size_t total = broadcast_last( left.count, label );
        const std::size_t right =
            affine( { row_spec{ { { total, 1 }, { left.d, -1 } }, {}, 0 } }, "count_right", "subtract", label );
        _right_counts.emplace( text, right );
        return right;
    }

    std::size_t gadget_pred_of_count( const unary_predicate& p, std::size_t c, const std::string& text )
    {
        const std::size_t index = positional( positional_kind::index );
        const std::size_t index_sq = positional( positional_kind::index_squared );
        const std::size_t theta = positional( positional_kind::pred, p );
        const std::size_t theta_n = positional( positional_kind::pred_at_n, p );

        // 2 j c_i - j^2 peaks at j = min(n - 1, c_i)
        attention_layer l = open();
        l.A.set( c, c, 2 );
        l.B.set( c, index, 1 );
        l.A.set_bias( index_sq, -1 );
        l.B.set( index_sq, index_sq, 1 );
        const std::size_t pulled_index = _width;
        add_row( l, row_spec{ {}, { { index, 1 } }, 0 } );
        const std::size_t pulled_theta = _width + 1;
        add_row( l, row_spec{ {}, { { theta, 1 } }, 0 } );
        emit( std::move( l ), "pred_of_count", "attention", text );
        (void)pulled_index;

        // I = min(1, n - c) = 1 - max(0, c - (n - 1))
        const std::size_t last = last_index( text );
        const std::size_t s =
            affine( { row_spec{ { { c, 1 }, { last, -1 } }, {}, 0 } }, "pred_of_count", "excess", text );
        relu( s, "pred_of_count", text );
        const std::size_t inside = affine( { row_spec{ { { s, -1 } }, {}, 1 } }, "pred_of_count", "indicator", text );

        const std::size_t below = gadget_and( inside, pulled_theta, text );
        const std::size_t outside = gadget_not( inside, text );
        const std::size_t at_n = gadget_and( outside, theta_n, text );
        return gadget_or( below, at_n, text );
    }

    // 1{l >= 0} = max(min(0, l) + 1, 0), min(0, l) = l - max(0, l)
    std::size_t gadget_lin_ineq( const formula& f, const std::string& text )
    {
        term_list sum;
        for ( const auto& t : f.terms() )
        {
            sum.emplace_back( count( t.direction, t.operand ), rational{ t.coef } );
        }
        const std::size_t l = affine( { row_spec{ sum, {}, 0 }, row_spec{ sum, {}, 0 } }, "lin_ineq", "sum", text );
        const std::size_t s = l + 1;
        relu( s, "lin_ineq", text );
        const std::size_t u = affine( { row_spec{ { { l, 1 }, { s, -1 } }, {}, 1 } }, "lin_ineq", "shift", text );
        relu( u, "lin_ineq", text );
        return u;
    }

    std::size_t build( const formula& f, const std::string& text )
    {
        switch ( f.kind() )
        {
        case formula_kind::atom:
        {
            const auto k = _sigma.index_of( f.symbol() );
            if ( !k )
            {
                throw domain_error( std::string{ "symbol '" } + f.symbol() + "' is not in the alphabet" );
            }
            return *k;
        }
        case formula_kind::top: return one( text );
        case formula_kind::pred: return positional( positional_kind::pred, f.predicate() );
        case formula_kind::negation: return gadget_not( compile( f.child( 0 ) ), text );
        case formula_kind::conjunction:
        {
            const std::size_t x = compile( f.child( 0 ) );
            return gadget_and( x, compile( f.child( 1 ) ), text );
        }
        case formula_kind::disjunction:
        {
            const std::size_t x = compile( f.child( 0 ) );
            return gadget_or( x, compile( f.child( 1 ) ), text );
        }
        case formula_kind::next: return gadget_next( compile( f.child( 0 ) ), text );
        case formula_kind::until:
        {
            const std::size_t phi = compile( f.child( 0 ) );
            return gadget_until( phi, compile( f.child( 1 ) ), text );
        }
        case formula_kind::pred_of_count:
            return gadget_pred_of_count( f.predicate(), count( f.direction(), f.child( 0 ) ), text );
        case formula_kind::lin_ineq: return gadget_lin_ineq( f, text );
        }
        throw model_error( "internal: unknown formula kind" );
    }

    const hac::alphabet& _sigma;
    std::vector<positional_component> _positional;
    fragment _kind;
    selector _selector;
    std::size_t _width;
    std::vector<layer> _layers;
    ordered_json _tags = ordered_json::array();
    std::vector<ledger_entry> _ledger;
    std::map<std::string, std::size_t> _coords;
    std::map<std::string, count_coords> _left_counts;
    std::map<std::string, std::size_t> _right_counts;
    std::optional<std::size_t> _one;
    std::optional<std::size_t> _last_index;
};

} // namespace

std::vector<positional_component> required_positional( const formula& phi )
{
    requirements r;
    r.visit( phi );
    return r.components();
}

compiled_model compile( const formula& phi, const hac::alphabet& sigma, const compile_options& options )
{
    for ( char c : atom_symbols( phi ) )
    {
        if ( !sigma.contains( c ) )
        {
            throw domain_error( std::string{ "symbol '" } + c + "' is not in the alphabet \"" + sigma.symbols() + "\"" );
        }
    }
    const fragment kind = classify( phi );
    auto positional = required_positional( phi );
    const bool transcendental =
        std::any_of( positional.begin(), positional.end(), []( const auto& p ) { return p.is_transcendental(); } );

    precision_policy precision;
    precision.a = options.precision_a.value_or( precision.a );
    precision.b = options.precision_b.value_or( precision.b );
    precision.mode = options.mode.value_or( transcendental ? numeric_mode::bigfloat : numeric_mode::exact );
    if ( precision.mode == numeric_mode::exact && transcendental )
    {
        throw model_error( "exact-rational mode is impossible here: X and U need cos/sin positional components" );
    }

    gadget_compiler g( sigma, positional, kind );
    const std::string text = phi.str();
    const std::size_t root = g.compile( phi );
    const std::size_t out = g.output( root, text );

    std::vector<rational> t( g.width() );
    t[out] = 1;

    ordered_json ledger = ordered_json::array();
    for ( const auto& e : g.ledger() )
    {
        ledger.push_back(
            ordered_json{ { "subformula", e.subformula }, { "coord", e.coord + 1 }, { "ready_after_layer", e.ready_after } } );
    }
    ordered_json metadata{ { "formula", text },
                           { "fragment", fragment_name( kind ) },
                           { "root_coord", root + 1 },
                           { "output_coord", out + 1 },
                           { "ledger", std::move( ledger ) },
                           { "layer_tags", std::move( g.tags() ) } };

    auto ledger_entries = g.ledger();
    encoder_model model{ sigma, std::move( positional ), std::move( g.layers() ), std::move( t ), precision,
                         std::move( metadata ) };
    return compiled_model{ std::move( model ), std::move( ledger_entries ), kind, root, out };
}

std::vector<ledger_entry> ledger_of( const encoder_model& model )
{
    std::vector<ledger_entry> out;
    const auto& meta = model.metadata();
    if ( !meta.is_object() || !meta.contains( "ledger" ) || !meta["ledger"].is_array() )
    {
        return out;
    }
    for ( const auto& e : meta["ledger"] )
    {
        try
        {
            const auto coord = e.at( "coord" ).get<std::size_t>();
            if ( coord < 1 || coord > model.output_width() )
            {
                throw format_error( "ledger coordinate out of range" );
            }
            out.push_back(
                ledger_entry{ e.at( "subformula" ).get<std::string>(), coord - 1, e.at( "ready_after_layer" ).get<std::size_t>() } );
        }
        catch ( const nlohmann::json::exception& ex )
        {
            throw format_error( std::string{ "malformed ledger entry: " } + ex.what() );
        }
    }
    return out;
}

} // namespace hac
