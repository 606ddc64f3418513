#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hac
{

/// Finite table of predicate values. Row n-1 holds theta_n(0..n) as a string
/// of n+1 characters '0'/'1'; lengths beyond the last row are undefined.
struct bit_table
{
    std::string name;
    std::vector<std::string> rows;

    /// Throws domain_error if a row has the wrong length or a non-bit character.
    void validate() const;
    [[nodiscard]] std::size_t bound() const { return rows.size(); }
};

enum class predicate_kind
{
    even,
    mod,
    eq,
    geq,
    midpoint,
    prime_shift,
    table
};

/// A unary numerical predicate: a family theta_n : {0..n} -> {0,1}, n >= 1.
class unary_predicate
{
public:
    static unary_predicate even();
    /// i = r (mod p); requires p >= 1 and 0 <= r < p.
    static unary_predicate mod( std::int64_t p, std::int64_t r );
    static unary_predicate eq( std::int64_t c );
    static unary_predicate geq( std::int64_t c );
    /// n even and i = n/2 - 1.
    static unary_predicate midpoint();
    /// i + 1 is prime.
    static unary_predicate prime_shift();
    static unary_predicate table( std::shared_ptr<const bit_table> data );

    [[nodiscard]] predicate_kind kind() const { return _kind; }
    /// Concrete-syntax name: even, mod, eq, geq, midpoint, primeshift, table.
    [[nodiscard]] std::string name() const;
    [[nodiscard]] const std::vector<std::int64_t>& params() const { return _params; }
    [[nodiscard]] const std::shared_ptr<const bit_table>& table_data() const { return _table; }

    /// theta_n(i). Defined for 0 <= i <= n; throws domain_error otherwise, and
    /// for table predicates when n exceeds the stored bound.
    [[nodiscard]] bool eval( std::int64_t n, std::int64_t i ) const;

    /// "@even", "@mod(2,0)", "@table(name)", ...
    [[nodiscard]] std::string str() const;

    friend bool operator==( const unary_predicate& a, const unary_predicate& b );

private:
    unary_predicate( predicate_kind kind, std::vector<std::int64_t> params );

    predicate_kind _kind;
    std::vector<std::int64_t> _params;
    std::shared_ptr<const bit_table> _table;
};

/// Named tables available to `@table(name)`.
class table_registry
{
public:
    void add( bit_table table );
    [[nodiscard]] std::shared_ptr<const bit_table> find( const std::string& name ) const;
    [[nodiscard]] bool empty() const { return _tables.empty(); }

private:
    std::map<std::string, std::shared_ptr<const bit_table>> _tables;
};

/// Builds a built-in predicate from its concrete name and integer parameters.
/// Tables are resolved through a table_registry instead. Throws domain_error
/// on unknown names or bad arity.
unary_predicate make_predicate( const std::string& name, const std::vector<std::int64_t>& params );

bool is_prime( std::int64_t k );

} // namespace hac
