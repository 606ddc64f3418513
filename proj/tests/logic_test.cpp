#include <doctest.h>

#include "generators.hpp"
#include "hac/error.hpp"
#include "hac/parser.hpp"
#include "hac/semantics.hpp"

using hac::formula;
using hac::formula_kind;

namespace
{

const hac::alphabet ab{ "ab" };

std::vector<bool> bits( std::initializer_list<int> values )
{
    std::vector<bool> out;
    for ( int v : values )
    {
        out.push_back( v != 0 );
    }
    return out;
}

formula parse( const std::string& text, const hac::alphabet& sigma = ab )
{
    return hac::parse_formula( text, sigma );
}

} // namespace

TEST_CASE( "grammar productions" )
{
    const formula u = parse( "a U b" );
    CHECK( u == formula::until( formula::atom( 'a' ), formula::atom( 'b' ) ) );

    const formula x = parse( "X (a & !b)" );
    CHECK( x == formula::next( formula::conjunction( formula::atom( 'a' ), formula::negation( formula::atom( 'b' ) ) ) ) );

    const formula l = parse( "[2*<-#a - 1*->#true >= 0]" );
    REQUIRE( l.kind() == formula_kind::lin_ineq );
    const auto terms = l.terms();
    REQUIRE( terms.size() == 2 );
    CHECK( terms[0].coef == 2 );
    CHECK( terms[0].direction == hac::count_direction::left );
    CHECK( terms[0].operand == formula::atom( 'a' ) );
    CHECK( terms[1].coef == -1 );
    CHECK( terms[1].direction == hac::count_direction::right );
    CHECK( terms[1].operand == formula::top() );
}

TEST_CASE( "precedence and associativity" )
{
    CHECK( parse( "a | b & a" ) == parse( "a | (b & a)" ) );
    CHECK( parse( "a U b U a" ) == parse( "a U (b U a)" ) );
    CHECK( parse( "!a U b" ) == parse( "(!a) U b" ) );
    CHECK( parse( "a & b & a" ) == parse( "(a & b) & a" ) );
    CHECK( parse( "F a" ) == formula::until( formula::top(), formula::atom( 'a' ) ) );
    CHECK( parse( "G a" ) == parse( "!(true U !a)" ) );
    CHECK( parse( "false" ) == formula::negation( formula::top() ) );
}

TEST_CASE( "parse errors carry byte offsets" )
{
    auto offset = [&]( const std::string& text ) -> std::size_t {
        try
        {
            parse( text );
        }
        catch ( const hac::parse_error& e )
        {
            return e.position();
        }
        return std::string::npos;
    };
    CHECK( offset( "a U" ) == 3 );
    CHECK( offset( "(a | b" ) == 6 );
    CHECK( offset( "a & c" ) == 4 );
    CHECK( offset( "a b" ) == 2 );
    CHECK( offset( "@nosuch" ) == 1 );
    CHECK( offset( "[2*<-#a >= 1]" ) != std::string::npos );
    CHECK( offset( "" ) == 0 );
}

TEST_CASE( "printing round-trips" )
{
    gen::engine rng{ 1 };
    const hac::alphabet abc{ "abc" };
    for ( int k = 0; k < 400; ++k )
    {
        const formula f = k % 2 ? gen::mon_formula( rng, abc, 4 ) : gen::cplus_formula( rng, abc, 3 );
        CAPTURE( f.str() );
        CHECK( parse( f.str(), abc ) == f );
    }
}

TEST_CASE( "classification" )
{
    CHECK( hac::classify( parse( "a U b" ) ) == hac::fragment::mon );
    CHECK( hac::classify( parse( "@even(->#a)" ) ) == hac::fragment::cplus );
    CHECK( hac::classify( parse( "@even & [1*<-#a >= 0]" ) ) == hac::fragment::cplus );
    CHECK( hac::classify( parse( "G (a | @midpoint)" ) ) == hac::fragment::mon );
}

TEST_CASE( "point evaluation" )
{
    CHECK( hac::eval_at( parse( "a U b" ), ab, "aab", 0 ) );
    CHECK_FALSE( hac::eval_at( parse( "X a" ), ab, "ba", 1 ) );
    CHECK( hac::eval_at( parse( "@even(->#a)" ), ab, "abab", 0 ) );
    CHECK_THROWS_AS( hac::eval_at( parse( "a" ), ab, "ab", 2 ), hac::domain_error );
}

TEST_CASE( "counting terms" )
{
    const formula a = formula::atom( 'a' );
    CHECK( hac::count_left( a, ab, "aba", 1 ) == 1 );
    CHECK( hac::count_right( a, ab, "aba", 1 ) == 1 );
    for ( std::size_t n = 1; n <= 6; ++n )
    {
        CHECK( hac::count_left( formula::top(), ab, std::string( n, 'b' ), n - 1 ) == n );
    }
}

TEST_CASE( "acceptance" )
{
    const formula majority = parse( "[2*->#a - 1*->#true - 1*<-#true >= 0]" );
    CHECK( hac::accepts( majority, ab, "aab" ) );
    CHECK_FALSE( hac::accepts( majority, ab, "abb" ) );
    CHECK_FALSE( hac::accepts( parse( "a" ), ab, "b" ) );
    CHECK_THROWS_AS( hac::accepts( parse( "a" ), ab, "" ), hac::domain_error );
    CHECK_THROWS_AS( hac::accepts( parse( "a" ), ab, "abc" ), hac::domain_error );
}

TEST_CASE( "traces" )
{
    CHECK( hac::trace( parse( "a" ), ab, "aba" ) == bits( { 1, 0, 1 } ) );
    CHECK( hac::trace( parse( "X b" ), ab, "ab" ) == bits( { 1, 0 } ) );
    CHECK( hac::trace( parse( "@even" ), ab, "bbb" ) == bits( { 1, 0, 1 } ) );
    CHECK( hac::trace( parse( "@midpoint" ), ab, "bbbb" ) == bits( { 0, 1, 0, 0 } ) );
    CHECK( hac::trace( parse( "(a | b) U b" ), ab, "ba" ) == bits( { 1, 0 } ) );
}

TEST_CASE( "until unfolds one step" )
{
    gen::engine rng{ 2 };
    for ( int k = 0; k < 300; ++k )
    {
        const formula phi = gen::mon_formula( rng, ab, 2 );
        const formula psi = gen::mon_formula( rng, ab, 2 );
        const formula u = formula::until( phi, psi );
        const formula unfolded = formula::disjunction( psi, formula::conjunction( phi, formula::next( u ) ) );
        const std::string w = gen::word( rng, ab, 1 + gen::below( rng, 12 ) );
        CAPTURE( u.str() );
        CAPTURE( w );
        CHECK( hac::trace( u, ab, w ) == hac::trace( unfolded, ab, w ) );
    }
}

TEST_CASE( "left and right counts are complementary" )
{
    gen::engine rng{ 3 };
    for ( int k = 0; k < 300; ++k )
    {
        const formula phi = gen::mon_formula( rng, ab, 3 );
        const std::string w = gen::word( rng, ab, 1 + gen::below( rng, 15 ) );
        const auto t = hac::trace( phi, ab, w );
        const std::size_t total = hac::count_left( phi, ab, w, w.size() - 1 );
        CHECK( total == hac::count_right( phi, ab, w, 0 ) );
        for ( std::size_t i = 0; i < w.size(); ++i )
        {
            CHECK( hac::count_left( phi, ab, w, i ) + hac::count_right( phi, ab, w, i ) == total + ( t[i] ? 1 : 0 ) );
        }
    }
}

TEST_CASE( "De Morgan and double negation" )
{
    gen::engine rng{ 4 };
    for ( int k = 0; k < 300; ++k )
    {
        const formula p = k % 3 ? gen::mon_formula( rng, ab, 3 ) : gen::cplus_formula( rng, ab, 2 );
        const formula q = gen::mon_formula( rng, ab, 3 );
        const std::string w = gen::word( rng, ab, 1 + gen::below( rng, 10 ) );
        const formula lhs = formula::negation( formula::conjunction( p, q ) );
        const formula rhs = formula::disjunction( formula::negation( p ), formula::negation( q ) );
        CHECK( hac::trace( lhs, ab, w ) == hac::trace( rhs, ab, w ) );
        CHECK( hac::trace( formula::negation( formula::negation( p ) ), ab, w ) == hac::trace( p, ab, w ) );
    }
}

TEST_CASE( "built-in predicates are total on 0..n" )
{
    const std::vector<hac::unary_predicate> preds{ hac::unary_predicate::even(), hac::unary_predicate::mod( 3, 1 ),
                                                   hac::unary_predicate::eq( 5 ), hac::unary_predicate::geq( 2 ),
                                                   hac::unary_predicate::midpoint(), hac::unary_predicate::prime_shift() };
    std::vector<std::int64_t> lengths;
    for ( std::int64_t n = 1; n <= 100; ++n )
    {
        lengths.push_back( n );
    }
    lengths.insert( lengths.end(), { 1000, 4096, 9999, 10000 } );
    for ( const auto& p : preds )
    {
        std::size_t failures = 0;
        for ( std::int64_t n : lengths )
        {
            for ( std::int64_t i = 0; i <= n; ++i )
            {
                try
                {
                    (void)p.eval( n, i );
                }
                catch ( const hac::error& )
                {
                    ++failures;
                }
            }
        }
        CAPTURE( p.str() );
        CHECK( failures == 0 );
        CHECK_THROWS_AS( (void)p.eval( 3, 4 ), hac::domain_error );
    }
    CHECK( hac::unary_predicate::prime_shift().eval( 10, 6 ) );  // 7 is prime
    CHECK_FALSE( hac::unary_predicate::prime_shift().eval( 10, 8 ) );
}

TEST_CASE( "table predicates" )
{
    hac::table_registry tables;
    tables.add( hac::bit_table{ "t", { "01", "101" } } );
    const formula f = hac::parse_formula( "@table(t)", ab, tables );
    CHECK( hac::trace( f, ab, "ab" ) == bits( { 1, 0 } ) );
    CHECK( hac::trace( f, ab, "a" ) == bits( { 0 } ) );
    CHECK_THROWS_AS( hac::trace( f, ab, "aaa" ), hac::domain_error );
    CHECK_THROWS_AS( hac::parse_formula( "@table(missing)", ab, tables ), hac::parse_error );
    CHECK_THROWS_AS( ( hac::bit_table{ "bad", { "012" } }.validate() ), hac::domain_error );
}

TEST_CASE( "alphabet validation" )
{
    CHECK_THROWS_AS( hac::alphabet{ "" }, hac::domain_error );
    CHECK_THROWS_AS( hac::alphabet{ "aa" }, hac::domain_error );
    CHECK_THROWS_AS( hac::alphabet{ "aX" }, hac::domain_error );
    CHECK_THROWS_AS( parse( "c" ), hac::parse_error );
}
