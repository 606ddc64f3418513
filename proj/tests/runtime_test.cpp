#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "generators.hpp"
#include "hac/error.hpp"
#include "hac/model_io.hpp"
#include "hac/runtime.hpp"

using hac::affine_map;
using hac::attention_layer;
using hac::encoder_model;
using hac::positional_component;
using hac::positional_kind;
using hac::rational;
using hac::scalar;

namespace
{

const hac::alphabet ab{ "ab" };

// C = [I | 0] on a width-d input; pulled rows are appended by the caller.
attention_layer passthrough( std::size_t d )
{
    attention_layer l{ affine_map{ d, d }, affine_map{ d, d }, affine_map{ d, 2 * d } };
    for ( std::size_t k = 0; k < d; ++k )
    {
        l.C.set( k, k, 1 );
    }
    return l;
}

std::vector<rational> unit( std::size_t width, std::size_t k )
{
    std::vector<rational> t( width );
    t[k] = 1;
    return t;
}

hac::vec rational_vec( gen::engine& rng, std::size_t d )
{
    hac::vec v;
    for ( std::size_t k = 0; k < d; ++k )
    {
        v.emplace_back( rational{ static_cast<std::int64_t>( gen::below( rng, 7 ) ) - 3,
                                  static_cast<std::int64_t>( gen::below( rng, 3 ) ) + 1 } );
    }
    return v;
}

} // namespace

TEST_CASE( "embedding is one-hot followed by the positional block" )
{
    const encoder_model m{ ab, { positional_component::of( positional_kind::index ) }, {}, unit( 3, 0 ) };
    const auto seq = hac::embed( m, "ba" );
    REQUIRE( seq.size() == 2 );
    CHECK( seq[0] == hac::vec{ 0, 1, 0 } );
    CHECK( seq[1] == hac::vec{ 1, 0, 1 } );

    const encoder_model inv{ ab, { positional_component::of( positional_kind::inv_index ) }, {}, unit( 3, 0 ) };
    CHECK( hac::embed( inv, "abb" )[2][2] == scalar{ rational( 1, 3 ) } );

    const encoder_model even{ ab, { positional_component::pred( hac::unary_predicate::even() ) }, {}, unit( 3, 0 ) };
    const auto e = hac::embed( even, "ab" );
    CHECK( e[0][2] == scalar{ 1 } );
    CHECK( e[1][2] == scalar{ 0 } );

    CHECK_THROWS_AS( hac::embed( m, "" ), hac::domain_error );
    CHECK_THROWS_AS( hac::embed( m, "ac" ), hac::domain_error );
}

TEST_CASE( "geometric positional components" )
{
    const auto c = positional_component::of( positional_kind::cos_geo );
    const auto s = positional_component::of( positional_kind::sin_geo );
    for ( std::int64_t i = 0; i < 20; ++i )
    {
        const double theta = M_PI * ( 1 - std::ldexp( 1.0, static_cast<int>( -i ) ) ) / 10;
        CHECK( c.eval( 20, i ).approx() == doctest::Approx( std::cos( theta ) ).epsilon( 1e-14 ) );
        CHECK( s.eval( 20, i ).approx() == doctest::Approx( std::sin( theta ) ).epsilon( 1e-12 ) );
    }
    const auto at_n = positional_component::pred_at_n( hac::unary_predicate::eq( 3 ) );
    CHECK( at_n.eval( 3, 0 ) == scalar{ 1 } );
    CHECK( at_n.eval( 4, 3 ) == scalar{ 0 } );
}

TEST_CASE( "constant scores select the minimum or the whole universe" )
{
    hac::sequence seq( 4, hac::vec{ 1, 0 } );
    const affine_map zero{ 2, 2 };
    for ( std::size_t i = 0; i < 4; ++i )
    {
        CHECK( hac::attention_select( zero, zero, seq, i, hac::selector::unique, false, 64, 1024 ) ==
               std::vector<std::size_t>{ 0 } );
    }
    CHECK( hac::attention_select( zero, zero, seq, 2, hac::selector::average, true, 64, 1024 ) ==
           std::vector<std::size_t>{ 0, 1, 2 } );
    CHECK( hac::attention_select( zero, zero, seq, 2, hac::selector::average, false, 64, 1024 ) ==
           std::vector<std::size_t>{ 0, 1, 2, 3 } );
}

TEST_CASE( "selection agrees with brute-force maximization" )
{
    gen::engine rng{ 21 };
    for ( int trial = 0; trial < 300; ++trial )
    {
        const std::size_t d = 1 + gen::below( rng, 3 );
        const std::size_t n = 1 + gen::below( rng, 7 );
        affine_map A{ d, d }, B{ d, d };
        for ( std::size_t r = 0; r < d; ++r )
        {
            for ( std::size_t c = 0; c < d; ++c )
            {
                A.set( r, c, static_cast<std::int64_t>( gen::below( rng, 3 ) ) - 1 );
                B.set( r, c, static_cast<std::int64_t>( gen::below( rng, 3 ) ) - 1 );
            }
        }
        hac::sequence seq;
        for ( std::size_t k = 0; k < n; ++k )
        {
            seq.push_back( rational_vec( rng, d ) );
        }
        const std::size_t i = gen::below( rng, n );
        const bool masked = gen::below( rng, 2 ) == 1;
        const std::size_t last = masked ? i : n - 1;

        std::vector<rational> scores;
        const auto ai = A.apply( seq[i] );
        for ( std::size_t j = 0; j <= last; ++j )
        {
            const auto bj = B.apply( seq[j] );
            rational s;
            for ( std::size_t r = 0; r < d; ++r )
            {
                s += ai[r].constant() * bj[r].constant();
            }
            scores.push_back( s );
        }
        const rational best = *std::max_element( scores.begin(), scores.end() );
        std::vector<std::size_t> maximizers;
        for ( std::size_t j = 0; j < scores.size(); ++j )
        {
            if ( scores[j] == best )
            {
                maximizers.push_back( j );
            }
        }
        CHECK( hac::attention_select( A, B, seq, i, hac::selector::average, masked, 64, 1024 ) == maximizers );
        CHECK( hac::attention_select( A, B, seq, i, hac::selector::unique, masked, 64, 1024 ) ==
               std::vector<std::size_t>{ maximizers.front() } );
    }
}

TEST_CASE( "relu layer" )
{
    const hac::sequence seq{ hac::vec{ -2, 5 } };
    const auto out = hac::apply_layer( hac::relu_layer{ 1 }, seq, 64, 1024 );
    CHECK( out[0] == hac::vec{ 0, 5 } );
    CHECK_THROWS_AS( hac::apply_layer( hac::relu_layer{ 3 }, seq, 64, 1024 ), hac::model_error );
}

TEST_CASE( "relu is idempotent" )
{
    gen::engine rng{ 22 };
    for ( int trial = 0; trial < 200; ++trial )
    {
        hac::sequence seq;
        const std::size_t d = 1 + gen::below( rng, 4 );
        for ( std::size_t k = 0; k < 1 + gen::below( rng, 5 ); ++k )
        {
            auto v = rational_vec( rng, d );
            v.back() += scalar::cos_pi( rational( 1, 10 ) ) - scalar{ rational( 19, 20 ) };
            seq.push_back( v );
        }
        const hac::relu_layer r{ 1 + gen::below( rng, d ) };
        const auto once = hac::apply_layer( r, seq, 64, 1024 );
        CHECK( hac::apply_layer( r, once, 64, 1024 ) == once );
        for ( const auto& v : once )
        {
            CHECK( hac::certified_sign( v[r.coord - 1], 64, 1024 ) >= 0 );
        }
    }
}

TEST_CASE( "average attention is exact" )
{
    attention_layer l = passthrough( 1 );
    l.selector = hac::selector::average;
    l.C.add_row();
    l.C.set( 1, 1, 1 );
    const hac::sequence seq{ hac::vec{ 0 }, hac::vec{ 1 } };
    const auto out = hac::apply_layer( l, seq, 64, 1024 );
    CHECK( out[0][1] == scalar{ rational( 1, 2 ) } );
    CHECK( out[1][1] == scalar{ rational( 1, 2 ) } );
}

TEST_CASE( "a hand-built next layer shifts the sequence" )
{
    const std::vector<positional_component> pos{ positional_component::of( positional_kind::cos_geo ),
                                                 positional_component::of( positional_kind::sin_geo ),
                                                 positional_component::of( positional_kind::alt_sign ) };
    attention_layer l = passthrough( 5 );
    l.A.set( 2, 2, 1 );
    l.A.set( 3, 3, 1 );
    l.A.set( 4, 4, -10 );
    l.B.set( 2, 2, 1 );
    l.B.set( 3, 3, 1 );
    l.B.set( 4, 4, 1 );
    const std::size_t pulled = l.C.add_row();
    l.C.set( pulled, 5, 1 ); // a-coordinate of the attended position
    const encoder_model m{ ab, pos, { l }, unit( 6, 5 ) };

    gen::engine rng{ 23 };
    for ( std::size_t n : { 3, 16 } )
    {
        const std::string w = gen::word( rng, ab, n );
        const auto r = hac::run( m, w );
        for ( std::size_t i = 0; i + 1 < n; ++i )
        {
            CHECK( r.layers[0].selections[i] == std::vector<std::size_t>{ i + 1 } );
            CHECK( r.output[i][5] == scalar{ w[i + 1] == 'a' ? 1 : 0 } );
        }
    }
}

TEST_CASE( "zero acceptance vector is invalid on every word" )
{
    const encoder_model m{ ab, {}, {}, { 0, 0 } };
    CHECK_THROWS_AS( hac::accept( m, "a" ), hac::model_error );
    CHECK_THROWS_AS( hac::accept( m, "abba" ), hac::model_error );
}

TEST_CASE( "model validation" )
{
    CHECK_THROWS_AS( ( encoder_model{ ab, {}, { hac::relu_layer{ 3 } }, { 1, 0 } } ), hac::model_error );
    CHECK_THROWS_AS( ( encoder_model{ ab, {}, {}, { 1 } } ), hac::model_error );
    const hac::precision_policy exact{ 4, 64, hac::numeric_mode::exact };
    CHECK_THROWS_AS( ( encoder_model{ ab, { positional_component::of( positional_kind::cos_geo ) }, {}, { 1, 0, 0 }, exact } ),
                     hac::model_error );
}

TEST_CASE( "precision law" )
{
    const hac::precision_policy p;
    CHECK( p.bits( 1 ) == 68 );
    CHECK( p.bits( 32 ) == 192 );
    const hac::precision_policy flat{ 0, 10, hac::numeric_mode::bigfloat };
    CHECK( flat.bits( 100 ) == hac::precision_policy::floor_bits() );
    CHECK( hac::precision_policy::floor_bits() >= 64 );
}

TEST_CASE( "a near-tie below the working precision is fragile" )
{
    // Score <A v_i, B v_j> = eps [v_j = b] with eps = 2^-(bits+1).
    const hac::precision_policy law;
    const std::size_t n = 2;
    const int bits = static_cast<int>( law.bits( n ) );
    attention_layer l = passthrough( 2 );
    l.A.set_bias( 0, 1 );
    l.B.set( 0, 1, rational::pow2( -( bits + 1 ) ) );
    const encoder_model m{ ab, {}, { l }, { 1, 0 } };
    const auto rep = hac::robustness_check( m, "ab" );
    CHECK( rep.fragile_layers == std::vector<std::size_t>{ 0 } );
    CHECK( rep.unchanged );
    CHECK( rep.base.layers[0].selections[0] == std::vector<std::size_t>{ 1 } );
    CHECK( rep.min_gaps[0] == doctest::Approx( std::ldexp( 1.0, -( bits + 1 ) ) ) );

    // The same model with a gap of 1 is not fragile.
    attention_layer wide = passthrough( 2 );
    wide.A.set_bias( 0, 1 );
    wide.B.set( 0, 1, 1 );
    const auto ok = hac::robustness_check( encoder_model{ ab, {}, { wide }, { 1, 0 } }, "ab" );
    CHECK( ok.fragile_layers.empty() );
}

TEST_CASE( "exact models are trivially robust" )
{
    const hac::precision_policy exact{ 4, 64, hac::numeric_mode::exact };
    const encoder_model m{ ab, { positional_component::of( positional_kind::index ) }, { passthrough( 3 ) }, unit( 3, 0 ), exact };
    const auto rep = hac::robustness_check( m, "abab" );
    CHECK( rep.unchanged );
    CHECK( rep.changed_layers.empty() );
}

TEST_CASE( "model documents round-trip" )
{
    attention_layer l = passthrough( 4 );
    l.selector = hac::selector::average;
    l.masked = true;
    l.A.set( 2, 2, rational( -3, 7 ) );
    l.B.set( 2, 3, 2 );
    l.C.add_row();
    l.C.set( 4, 6, rational( 1, 2 ) );
    l.C.set_bias( 4, rational( -5, 3 ) );
    hac::table_registry tables;
    const std::vector<positional_component> pos{
        positional_component::of( positional_kind::index ),
        positional_component::pred_at_n( hac::unary_predicate::table(
            std::make_shared<const hac::bit_table>( hac::bit_table{ "t", { "01", "110" } } ) ) ) };
    const encoder_model m{ ab, pos, { l, hac::relu_layer{ 5 } }, unit( 5, 4 ), {}, nlohmann::ordered_json{ { "note", "x" } } };
    const std::string text = hac::model_to_string( m );
    const encoder_model back = hac::model_from_string( text );
    CHECK( back == m );
    CHECK( hac::model_to_string( back ) == text );

    auto doc = hac::model_to_json( m );
    CHECK( doc["acceptance"][4] == "1" );
    CHECK( doc["layers"][0]["A"]["matrix"][2][2] == "-3/7" );
    CHECK( doc["layers"][1] == nlohmann::ordered_json{ { "kind", "relu" }, { "coord", 5 } } );
}

TEST_CASE( "model documents reject unknown or malformed fields" )
{
    const encoder_model m{ ab, { positional_component::of( positional_kind::index ) }, { passthrough( 3 ) }, unit( 3, 0 ) };
    const auto good = hac::model_to_json( m );

    auto extra = good;
    extra["comment"] = "hi";
    CHECK_THROWS_AS( hac::model_from_json( extra ), hac::format_error );

    auto nested = good;
    nested["layers"][0]["dropout"] = 0;
    CHECK_THROWS_AS( hac::model_from_json( nested ), hac::format_error );

    auto precision = good;
    precision["precision"]["c"] = 1;
    CHECK_THROWS_AS( hac::model_from_json( precision ), hac::format_error );

    auto float_entry = good;
    float_entry["acceptance"][0] = "0.5";
    CHECK_THROWS_AS( hac::model_from_json( float_entry ), hac::format_error );

    auto missing = good;
    missing.erase( "acceptance" );
    CHECK_THROWS_AS( hac::model_from_json( missing ), hac::format_error );

    auto shape = good;
    shape["layers"][0]["A"]["matrix"][0].push_back( "1" );
    CHECK_THROWS_AS( hac::model_from_json( shape ), hac::format_error );

    CHECK_THROWS_AS( hac::model_from_string( "{not json" ), hac::format_error );
}
