#include <doctest.h>

#include "generators.hpp"
#include "hac/check.hpp"
#include "hac/compiler.hpp"
#include "hac/error.hpp"
#include "hac/model_io.hpp"
#include "hac/parser.hpp"
#include "hac/semantics.hpp"

using hac::rational;
using hac::scalar;

namespace
{

const hac::alphabet ab{ "ab" };

hac::compiled_model compile( const std::string& text, const hac::alphabet& sigma = ab )
{
    return hac::compile( hac::parse_formula( text, sigma ), sigma );
}

// Index of the k-th layer tagged (gadget, step).
std::size_t tagged_layer( const hac::encoder_model& m, const std::string& gadget, const std::string& step, std::size_t k = 0 )
{
    const auto& tags = m.metadata().at( "layer_tags" );
    for ( std::size_t l = 0; l < tags.size(); ++l )
    {
        if ( tags[l]["gadget"] == gadget && tags[l]["step"] == step && k-- == 0 )
        {
            return l;
        }
    }
    FAIL( "no layer " << gadget << "/" << step );
    return 0;
}

// Column written last by layer l, read from the final sequence.
std::vector<scalar> column_of( const hac::compiled_model& cm, std::size_t l, const std::string& word )
{
    const std::size_t coord = cm.model.width_before( l + 1 ) - 1;
    const auto r = hac::run( cm.model, word );
    std::vector<scalar> out;
    for ( const auto& v : r.output )
    {
        out.push_back( v[coord] );
    }
    return out;
}

std::vector<scalar> ledger_column( const hac::compiled_model& cm, const std::string& sub, const std::string& word )
{
    for ( const auto& e : cm.ledger )
    {
        if ( e.subformula == sub )
        {
            const auto r = hac::run( cm.model, word );
            std::vector<scalar> out;
            for ( const auto& v : r.output )
            {
                out.push_back( v[e.coord] );
            }
            return out;
        }
    }
    FAIL( "no ledger entry " << sub );
    return {};
}

std::vector<scalar> ints( std::initializer_list<rational> values )
{
    return { values.begin(), values.end() };
}

void agrees_exhaustively( const std::string& text, std::size_t max_len, const hac::alphabet& sigma = ab )
{
    const hac::formula phi = hac::parse_formula( text, sigma );
    const auto cm = hac::compile( phi, sigma );
    hac::check_options o;
    o.max_len = max_len;
    const auto rep = hac::check_model( phi, cm.model, cm.ledger, o );
    CAPTURE( text );
    CHECK( rep.equivalent() );
    CHECK( rep.margin_violations == 0 );
    CHECK( rep.robustness_changes == 0 );
}

} // namespace

TEST_CASE( "atoms and predicates" )
{
    CHECK( ledger_column( compile( "a" ), "a", "ab" ) == ints( { 1, 0 } ) );
    CHECK( ledger_column( compile( "@even" ), "@even", "bbb" ) == ints( { 1, 0, 1 } ) );
    CHECK( ledger_column( compile( "@midpoint" ), "@midpoint", "bbbb" ) == ints( { 0, 1, 0, 0 } ) );
    CHECK( hac::accept( compile( "a" ).model, "a" ) == hac::decision::accept );
    CHECK( hac::accept( compile( "a" ).model, "b" ) == hac::decision::reject );
}

TEST_CASE( "boolean gadgets" )
{
    const auto cm = compile( "a | b" );
    CHECK( ledger_column( cm, "a | b", "ab" ) == ints( { 1, 1 } ) );
    const auto neither = compile( "a & b | !a & !b" );
    CHECK( ledger_column( neither, "a & b", "ab" ) == ints( { 0, 0 } ) );
    agrees_exhaustively( "!a | b", 5 );
    agrees_exhaustively( "a & !b | !(b | a)", 5 );
}

TEST_CASE( "next gadget" )
{
    CHECK( ledger_column( compile( "X a" ), "X a", "ba" ) == ints( { 1, 0 } ) );
    CHECK( ledger_column( compile( "X a" ), "X a", "a" ) == ints( { 0 } ) );
    agrees_exhaustively( "X X a", 6 );
}

TEST_CASE( "zero-last gadget" )
{
    const auto ones = compile( "X true" );
    const std::size_t sub = tagged_layer( ones.model, "zero_last", "subtract" );
    CHECK( column_of( ones, sub, "aaa" ) == ints( { 1, 1, 0 } ) );
    const auto zeros = compile( "X false" );
    CHECK( column_of( zeros, tagged_layer( zeros.model, "zero_last", "subtract" ), "abab" ) == ints( { 0, 0, 0, 0 } ) );
}

TEST_CASE( "broadcast of the last position" )
{
    const auto cm = compile( "X a" );
    const std::size_t l = tagged_layer( cm.model, "broadcast_last", "attention" );
    CHECK( column_of( cm, l, "ababa" ) == ints( { 4, 4, 4, 4, 4 } ) );
    CHECK( column_of( cm, l, "b" ) == ints( { 0 } ) );

    const auto r = hac::run( cm.model, std::string( 32, 'a' ) );
    for ( std::size_t i = 0; i < 32; ++i )
    {
        CHECK( r.layers[l].selections[i] == std::vector<std::size_t>{ 31 } );
    }

    // A running total broadcast from the end is the total.
    const auto total = compile( "@even(->#a)" );
    const std::size_t bl = tagged_layer( total.model, "broadcast_last", "attention" );
    CHECK( column_of( total, bl, "abaab" ) == ints( { 3, 3, 3, 3, 3 } ) );
}

TEST_CASE( "until gadget" )
{
    CHECK( ledger_column( compile( "a U b" ), "a U b", "aab" ) == ints( { 1, 1, 1 } ) );
    agrees_exhaustively( "a U b", 6 );
}

TEST_CASE( "until_corrected_gadget_on_ba" )
{
    // The first position where a|b fails does not exist here; the gadget
    // must stop at the first b instead.
    const auto cm = compile( "(a | b) U b" );
    CHECK( ledger_column( cm, "(a | b) U b", "ba" ) == ints( { 1, 0 } ) );
    CHECK( hac::accept( cm.model, "ba" ) == hac::decision::accept );
}

TEST_CASE( "prefix mean and counts" )
{
    const auto cm = compile( "@even(<-#a) & @even(->#a)" );
    const std::string w = "aba";
    CHECK( column_of( cm, tagged_layer( cm.model, "prefix_mean", "attention" ), w ) ==
           ints( { 1, rational( 1, 2 ), rational( 2, 3 ) } ) );
    CHECK( column_of( cm, tagged_layer( cm.model, "count", "total" ), w ) == ints( { 1, 1, 2 } ) );
    CHECK( column_of( cm, tagged_layer( cm.model, "count_right", "subtract" ), w ) == ints( { 2, 1, 1 } ) );

    CHECK( column_of( cm, tagged_layer( cm.model, "prefix_mean", "attention" ), "bbb" ) == ints( { 0, 0, 0 } ) );
    CHECK( column_of( cm, tagged_layer( cm.model, "count", "total" ), "bbb" ) == ints( { 0, 0, 0 } ) );
    CHECK( column_of( cm, tagged_layer( cm.model, "prefix_mean", "attention" ), "aaaa" ) == ints( { 1, 1, 1, 1 } ) );
    CHECK( column_of( cm, tagged_layer( cm.model, "count_right", "subtract" ), "aaaa" ) == ints( { 4, 3, 2, 1 } ) );
}

TEST_CASE( "counts on random columns" )
{
    const auto cm = compile( "@even(<-#a) & @even(->#a)" );
    const std::size_t left = tagged_layer( cm.model, "count", "total" );
    const std::size_t right = tagged_layer( cm.model, "count_right", "subtract" );
    const hac::formula a = hac::formula::atom( 'a' );
    gen::engine rng{ 31 };
    for ( int k = 0; k < 500; ++k )
    {
        const std::string w = gen::word( rng, ab, 1 + gen::below( rng, 20 ) );
        const auto l = column_of( cm, left, w );
        const auto r = column_of( cm, right, w );
        for ( std::size_t i = 0; i < w.size(); ++i )
        {
            CHECK( l[i] == scalar{ static_cast<std::int64_t>( hac::count_left( a, ab, w, i ) ) } );
            CHECK( l[i] + r[i] == scalar{ static_cast<std::int64_t>( hac::count_left( a, ab, w, w.size() - 1 ) ) } +
                                      scalar{ w[i] == 'a' ? 1 : 0 } );
        }
    }
}

TEST_CASE( "predicate of a count" )
{
    // ->#true = n - i, so n = 5 visits every count 1..5, the last one equal to n.
    const auto cm = compile( "@even(->#true)" );
    CHECK( ledger_column( cm, "@even(->#true)", "aaaaa" ) == ints( { 0, 1, 0, 1, 0 } ) );
    const auto odd = compile( "@mod(2,1)(->#true)" );
    CHECK( ledger_column( odd, "@mod(2,1)(->#true)", "aaaaa" ) == ints( { 1, 0, 1, 0, 1 } ) );
    // <-#b reaches 0 as well
    const auto zero = compile( "@even(<-#b)" );
    CHECK( ledger_column( zero, "@even(<-#b)", "abba" ) == ints( { 1, 0, 1, 1 } ) );
    agrees_exhaustively( "@mod(2,0)(->#a)", 8 );
}

TEST_CASE( "linear inequality" )
{
    const auto cm = compile( "[1*->#a - 1*->#b >= 0]" );
    CHECK( hac::accept( cm.model, "ab" ) == hac::decision::accept );  // l = 0
    CHECK( hac::accept( cm.model, "abb" ) == hac::decision::reject ); // l = -1
    agrees_exhaustively( "[2*->#a - 1*->#true - 1*<-#true >= 0]", 8 );
}

TEST_CASE( "Mon models use only unique unmasked attention" )
{
    gen::engine rng{ 32 };
    for ( int k = 0; k < 60; ++k )
    {
        const hac::formula phi = gen::mon_formula( rng, ab, 3 );
        const auto cm = hac::compile( phi, ab );
        CHECK( cm.kind == hac::fragment::mon );
        for ( const auto& l : cm.model.layers() )
        {
            if ( const auto* att = std::get_if<hac::attention_layer>( &l ) )
            {
                CHECK( att->selector == hac::selector::unique );
                CHECK_FALSE( att->masked );
            }
        }
    }
    const auto parity = compile( "@mod(2,0)(->#a)" );
    bool masked_average = false;
    for ( const auto& l : parity.model.layers() )
    {
        if ( const auto* att = std::get_if<hac::attention_layer>( &l ) )
        {
            masked_average |= att->masked && att->selector == hac::selector::average;
        }
    }
    CHECK( masked_average );
}

TEST_CASE( "every ledger column is the subformula's trace" )
{
    gen::engine rng{ 33 };
    for ( int k = 0; k < 25; ++k )
    {
        const hac::formula phi = k % 2 ? gen::mon_formula( rng, ab, 3 ) : gen::cplus_formula( rng, ab, 2 );
        const auto cm = hac::compile( phi, ab );
        hac::check_options o;
        o.max_len = 5;
        o.robustness = false;
        const auto rep = hac::check_model( phi, cm.model, cm.ledger, o );
        CAPTURE( phi.str() );
        CHECK( rep.equivalent() );
        CHECK( rep.margin_violations == 0 );
        CHECK( cm.ledger.size() == hac::subformulas( phi ).size() );
    }
}

TEST_CASE( "size is linear in the formula" )
{
    gen::engine rng{ 34 };
    constexpr std::size_t kappa = 40;
    for ( int k = 0; k < 80; ++k )
    {
        const hac::formula phi = k % 2 ? gen::mon_formula( rng, ab, 5 ) : gen::cplus_formula( rng, ab, 4 );
        const auto cm = hac::compile( phi, ab );
        CAPTURE( phi.str() );
        CHECK( cm.model.layers().size() <= kappa * phi.size() );
        CHECK( cm.model.output_width() <= ab.size() + cm.model.positional().size() + kappa * phi.size() );
    }
}

TEST_CASE( "acceptance reads 2 root - 1" )
{
    const auto cm = compile( "a U b" );
    for ( const std::string w : { "a", "b", "ab", "aa", "aab" } )
    {
        const auto r = hac::run( cm.model, w );
        CHECK( ( r.score == scalar{ 1 } || r.score == scalar{ -1 } ) );
        CHECK( r.output[0][cm.output_coord] == r.output[0][cm.root_coord] * rational{ 2 } - scalar{ 1 } );
    }
}

TEST_CASE( "precision mode selection" )
{
    CHECK( compile( "@mod(2,0)(->#a)" ).model.precision().mode == hac::numeric_mode::exact );
    CHECK( compile( "a U b" ).model.precision().mode == hac::numeric_mode::bigfloat );
    hac::compile_options exact;
    exact.mode = hac::numeric_mode::exact;
    CHECK_THROWS_AS( hac::compile( hac::parse_formula( "X a", ab ), ab, exact ), hac::model_error );
    hac::compile_options law;
    law.precision_a = 8;
    law.precision_b = 100;
    const auto cm = hac::compile( hac::parse_formula( "X a", ab ), ab, law );
    CHECK( cm.model.precision().a == 8 );
    CHECK( cm.model.precision().b == 100 );
}

TEST_CASE( "foreign atoms are rejected" )
{
    const hac::alphabet abc{ "abc" };
    CHECK_THROWS_AS( hac::compile( hac::parse_formula( "c", abc ), ab ), hac::domain_error );
}

TEST_CASE( "the ledger survives the model document" )
{
    const auto cm = compile( "a U (b & X a)" );
    const auto back = hac::model_from_string( hac::model_to_string( cm.model ) );
    const auto ledger = hac::ledger_of( back );
    REQUIRE( ledger.size() == cm.ledger.size() );
    for ( std::size_t k = 0; k < ledger.size(); ++k )
    {
        CHECK( ledger[k].subformula == cm.ledger[k].subformula );
        CHECK( ledger[k].coord == cm.ledger[k].coord );
        CHECK( ledger[k].ready_after == cm.ledger[k].ready_after );
    }
    CHECK( back.metadata()["formula"] == "a U (b & X a)" );
}
