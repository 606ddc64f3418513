#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hac/predicate.hpp"

namespace hac
{

enum class formula_kind
{
    atom,
    top,
    negation,
    conjunction,
    disjunction,
    next,
    until,
    pred,
    pred_of_count,
    lin_ineq
};

/// Which counting term: left counts positions 0..i, right counts i..n-1 (both inclusive).
enum class count_direction
{
    left,
    right
};

enum class fragment
{
    mon,  ///< LTL with unary numerical predicates
    cplus ///< additionally counting formulas and linear inequalities
};

class formula;
struct linear_term;

/// One summand `coef * #phi` of a linear inequality.
struct count_term
{
    std::int64_t coef;
    count_direction direction;
    std::shared_ptr<const struct formula_node> operand;
};

struct formula_node
{
    formula_kind kind;
    char symbol = 0;                          // atom
    std::optional<unary_predicate> predicate; // pred, pred_of_count
    count_direction direction = count_direction::left; // pred_of_count
    std::vector<std::shared_ptr<const formula_node>> children;
    std::vector<count_term> terms;            // lin_ineq
};

/// Immutable formula of LTL(Mon) / LTL(C,+). Cheap to copy; subtrees are shared.
class formula
{
public:
    static formula atom( char symbol );
    static formula top();
    static formula negation( const formula& f );
    static formula conjunction( const formula& a, const formula& b );
    static formula disjunction( const formula& a, const formula& b );
    static formula next( const formula& f );
    static formula until( const formula& a, const formula& b );
    static formula pred( unary_predicate p );
    static formula pred_of_count( unary_predicate p, count_direction direction, const formula& f );
    using term = linear_term;
    /// Sum of coef * #operand >= 0. Requires at least one term.
    static formula lin_ineq( const std::vector<term>& terms );

    /// F f := true U f
    static formula eventually( const formula& f );
    /// G f := !F !f
    static formula globally( const formula& f );

    explicit formula( std::shared_ptr<const formula_node> node );

    [[nodiscard]] formula_kind kind() const { return _node->kind; }
    [[nodiscard]] char symbol() const { return _node->symbol; }
    [[nodiscard]] const unary_predicate& predicate() const { return *_node->predicate; }
    [[nodiscard]] count_direction direction() const { return _node->direction; }
    [[nodiscard]] std::size_t arity() const { return _node->children.size(); }
    [[nodiscard]] formula child( std::size_t k ) const { return formula{ _node->children.at( k ) }; }
    [[nodiscard]] std::vector<term> terms() const;
    [[nodiscard]] const formula_node* node() const { return _node.get(); }
    [[nodiscard]] const std::shared_ptr<const formula_node>& shared() const { return _node; }

    /// Number of nodes (counting each inequality term's operand subtree).
    [[nodiscard]] std::size_t size() const;

    /// Concrete syntax accepted by parse_formula; parse(str()) reproduces the tree.
    [[nodiscard]] std::string str() const;

    friend bool operator==( const formula& a, const formula& b );

private:
    std::shared_ptr<const formula_node> _node;
};

/// Summand `coef * #operand` of formula::lin_ineq.
struct linear_term
{
    std::int64_t coef;
    count_direction direction;
    formula operand;
};

fragment classify( const formula& f );

/// Distinct subformulas (by printed form) in post-order; the formula itself is last.
std::vector<formula> subformulas( const formula& f );

/// Every atom symbol occurring in f, in first-occurrence order.
std::string atom_symbols( const formula& f );

} // namespace hac
