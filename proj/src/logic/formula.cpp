#include "hac/formula.hpp"

#include <functional>
#include <limits>
#include <set>

#include "hac/error.hpp"

namespace hac
{

namespace
{

using node_ptr = std::shared_ptr<const formula_node>;

node_ptr make_node( formula_kind kind, std::vector<node_ptr> children = {} )
{
    auto n = std::make_shared<formula_node>();
    n->kind = kind;
    n->children = std::move( children );
    return n;
}

// Binding strength used by the printer: | < & < U < prefix/primary.
enum level : int
{
    level_or = 1,
    level_and = 2,
    level_until = 3,
    level_unary = 4
};

std::string print( const formula_node& n, int min_level );

std::string wrap( std::string text, int own, int min_level )
{
    return own < min_level ? "(" + text + ")" : text;
}

std::string print_count( count_direction d, const formula_node& operand )
{
    return std::string{ d == count_direction::left ? "<-#" : "->#" } + print( operand, level_unary );
}

std::string print( const formula_node& n, int min_level )
{
    switch ( n.kind )
    {
    case formula_kind::atom: return std::string( 1, n.symbol );
    case formula_kind::top: return "true";
    case formula_kind::pred: return n.predicate->str();
    case formula_kind::negation: return "!" + print( *n.children[0], level_unary );
    case formula_kind::next: return "X " + print( *n.children[0], level_unary );
    case formula_kind::conjunction:
        return wrap( print( *n.children[0], level_and ) + " & " + print( *n.children[1], level_until ), level_and,
                     min_level );
    case formula_kind::disjunction:
        return wrap( print( *n.children[0], level_or ) + " | " + print( *n.children[1], level_and ), level_or,
                     min_level );
    case formula_kind::until:
        return wrap( print( *n.children[0], level_unary ) + " U " + print( *n.children[1], level_until ), level_until,
                     min_level );
    case formula_kind::pred_of_count:
        return n.predicate->str() + "(" + print_count( n.direction, *n.children[0] ) + ")";
    case formula_kind::lin_ineq:
    {
        std::string out = "[";
        for ( std::size_t k = 0; k < n.terms.size(); ++k )
        {
            const auto& t = n.terms[k];
            if ( k == 0 )
            {
                out += std::to_string( t.coef );
            }
            else
            {
                out += t.coef < 0 ? " - " + std::to_string( -t.coef ) : " + " + std::to_string( t.coef );
            }
            out += "*" + print_count( t.direction, *t.operand );
        }
        return out + " >= 0]";
    }
    }
    return {};
}

bool equal_nodes( const formula_node& a, const formula_node& b )
{
    if ( &a == &b )
    {
        return true;
    }
    if ( a.kind != b.kind || a.symbol != b.symbol || a.direction != b.direction ||
         a.children.size() != b.children.size() || a.terms.size() != b.terms.size() ||
         a.predicate.has_value() != b.predicate.has_value() )
    {
        return false;
    }
    if ( a.predicate && !( *a.predicate == *b.predicate ) )
    {
        return false;
    }
    for ( std::size_t k = 0; k < a.children.size(); ++k )
    {
        if ( !equal_nodes( *a.children[k], *b.children[k] ) )
        {
            return false;
        }
    }
    for ( std::size_t k = 0; k < a.terms.size(); ++k )
    {
        if ( a.terms[k].coef != b.terms[k].coef || a.terms[k].direction != b.terms[k].direction ||
             !equal_nodes( *a.terms[k].operand, *b.terms[k].operand ) )
        {
            return false;
        }
    }
    return true;
}

} // namespace

formula::formula( std::shared_ptr<const formula_node> node ) : _node{ std::move( node ) }
{
    if ( !_node )
    {
        throw domain_error( "null formula node" );
    }
}

formula formula::atom( char symbol )
{
    auto n = std::make_shared<formula_node>();
    n->kind = formula_kind::atom;
    n->symbol = symbol;
    return formula{ n };
}

formula formula::top()
{
    return formula{ make_node( formula_kind::top ) };
}

formula formula::negation( const formula& f )
{
    return formula{ make_node( formula_kind::negation, { f._node } ) };
}

formula formula::conjunction( const formula& a, const formula& b )
{
    return formula{ make_node( formula_kind::conjunction, { a._node, b._node } ) };
}

formula formula::disjunction( const formula& a, const formula& b )
{
    return formula{ make_node( formula_kind::disjunction, { a._node, b._node } ) };
}

formula formula::next( const formula& f )
{
    return formula{ make_node( formula_kind::next, { f._node } ) };
}

formula formula::until( const formula& a, const formula& b )
{
    return formula{ make_node( formula_kind::until, { a._node, b._node } ) };
}

formula formula::pred( unary_predicate p )
{
    auto n = std::make_shared<formula_node>();
    n->kind = formula_kind::pred;
    n->predicate = std::move( p );
    return formula{ n };
}

formula formula::pred_of_count( unary_predicate p, count_direction direction, const formula& f )
{
    auto n = std::make_shared<formula_node>();
    n->kind = formula_kind::pred_of_count;
    n->predicate = std::move( p );
    n->direction = direction;
    n->children = { f._node };
    return formula{ n };
}

formula formula::lin_ineq( const std::vector<term>& terms )
{
    if ( terms.empty() )
    {
        throw domain_error( "linear inequality needs at least one term" );
    }
    auto n = std::make_shared<formula_node>();
    n->kind = formula_kind::lin_ineq;
    for ( const auto& t : terms )
    {
        if ( t.coef == std::numeric_limits<std::int64_t>::min() )
        {
            throw domain_error( "inequality coefficient out of range" );
        }
        n->terms.push_back( count_term{ t.coef, t.direction, t.operand._node } );
    }
    return formula{ n };
}

formula formula::eventually( const formula& f )
{
    return until( top(), f );
}

formula formula::globally( const formula& f )
{
    return negation( eventually( negation( f ) ) );
}

std::vector<formula::term> formula::terms() const
{
    std::vector<term> out;
    for ( const auto& t : _node->terms )
    {
        out.push_back( term{ t.coef, t.direction, formula{ t.operand } } );
    }
    return out;
}

std::size_t formula::size() const
{
    std::size_t total = 1;
    for ( const auto& c : _node->children )
    {
        total += formula{ c }.size();
    }
    for ( const auto& t : _node->terms )
    {
        total += formula{ t.operand }.size();
    }
    return total;
}

std::string formula::str() const
{
    return print( *_node, level_or );
}

bool operator==( const formula& a, const formula& b )
{
    return equal_nodes( *a._node, *b._node );
}

fragment classify( const formula& f )
{
    if ( f.kind() == formula_kind::pred_of_count || f.kind() == formula_kind::lin_ineq )
    {
        return fragment::cplus;
    }
    for ( std::size_t k = 0; k < f.arity(); ++k )
    {
        if ( classify( f.child( k ) ) == fragment::cplus )
        {
            return fragment::cplus;
        }
    }
    return fragment::mon;
}

std::vector<formula> subformulas( const formula& f )
{
    std::vector<formula> out;
    std::set<std::string> seen;
    std::function<void( const formula& )> visit = [&]( const formula& g ) {
        for ( std::size_t k = 0; k < g.arity(); ++k )
        {
            visit( g.child( k ) );
        }
        for ( const auto& t : g.terms() )
        {
            visit( t.operand );
        }
        if ( seen.insert( g.str() ).second )
        {
            out.push_back( g );
        }
    };
    visit( f );
    return out;
}

std::string atom_symbols( const formula& f )
{
    std::string out;
    for ( const auto& g : subformulas( f ) )
    {
        if ( g.kind() == formula_kind::atom && out.find( g.symbol() ) == std::string::npos )
        {
            out += g.symbol();
        }
    }
    return out;
}

} // namespace hac
