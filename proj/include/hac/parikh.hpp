#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hac/alphabet.hpp"
#include "hac/formula.hpp"

namespace hac
{

using count_vector = std::vector<std::int64_t>;
using membership = std::function<bool( std::string_view )>;

/// v0 + v1 N + ... + vr N with v0, vi in N^d and every period non-zero.
class linear_set
{
public:
    /// Throws domain_error on d = 0, inconsistent dimensions, negative entries or zero periods.
    linear_set( count_vector base, std::vector<count_vector> periods = {} );

    [[nodiscard]] std::size_t dimension() const { return _base.size(); }
    [[nodiscard]] const count_vector& base() const { return _base; }
    [[nodiscard]] const std::vector<count_vector>& periods() const { return _periods; }

    /// Exact membership by bounded search over the period multipliers.
    [[nodiscard]] bool contains( const count_vector& v ) const;

private:
    count_vector _base;
    std::vector<count_vector> _periods;
};

/// Finite, non-empty union of linear sets of one dimension.
class semilinear_set
{
public:
    explicit semilinear_set( std::vector<linear_set> components );

    [[nodiscard]] std::size_t dimension() const { return _components.front().dimension(); }
    [[nodiscard]] const std::vector<linear_set>& components() const { return _components; }
    [[nodiscard]] bool contains( const count_vector& v ) const;

private:
    std::vector<linear_set> _components;
};

/// Throws domain_error on a dimension mismatch.
bool semilinear_member( const count_vector& v, const semilinear_set& s );

/// |w|_a for each symbol a of sigma, in alphabet order.
count_vector parikh_vector( std::string_view word, const alphabet& sigma );

/// The language w0 w1* ... wr*, where wk = a1^vk[1] ... ad^vk[d].
class witness_language
{
public:
    /// Throws domain_error if |sigma| differs from the dimension of s.
    witness_language( const linear_set& s, const alphabet& sigma );

    [[nodiscard]] const std::string& prefix() const { return _prefix; }
    [[nodiscard]] const std::vector<std::string>& periods() const { return _periods; }

    /// Exact membership: dynamic programming over (position, current star).
    [[nodiscard]] bool contains( std::string_view word ) const;

    /// "a1a2 (a1a1a3)*" with symbol k printed as names[k].
    [[nodiscard]] std::string pattern( const std::vector<std::string>& names ) const;
    /// Pattern over the default names a1..ad.
    [[nodiscard]] std::string pattern() const;

private:
    alphabet _sigma;
    std::string _prefix;
    std::vector<std::string> _periods;
};

/// Count vectors of the members among all words of length 0..max_total.
std::set<count_vector> parikh_image( const membership& member, const alphabet& sigma, std::size_t max_total );

/// { v in s : sum(v) <= max_total }
std::set<count_vector> bounded_members( const semilinear_set& s, std::size_t max_total );

/// Quantifier-free counting constraint over letter counts |w|_a.
class counting_constraint
{
public:
    enum class kind
    {
        conjunction,
        disjunction,
        negation,
        inequality, ///< sum coef_a |w|_a + constant >= 0
        congruence  ///< |w|_letter = residue (mod modulus)
    };

    static counting_constraint all_of( std::vector<counting_constraint> parts );
    static counting_constraint any_of( std::vector<counting_constraint> parts );
    static counting_constraint negation( counting_constraint part );
    /// Coefficients in the order given; zero coefficients are allowed and ignored.
    static counting_constraint inequality( std::vector<std::pair<char, std::int64_t>> coefs, std::int64_t constant );
    /// Requires modulus >= 1 and 0 <= residue < modulus.
    static counting_constraint congruence( char letter, std::int64_t modulus, std::int64_t residue );

    [[nodiscard]] kind type() const { return _kind; }
    [[nodiscard]] const std::vector<counting_constraint>& parts() const { return _parts; }
    [[nodiscard]] const std::vector<std::pair<char, std::int64_t>>& coefs() const { return _coefs; }
    [[nodiscard]] std::int64_t constant() const { return _constant; }
    [[nodiscard]] char letter() const { return _letter; }
    [[nodiscard]] std::int64_t modulus() const { return _modulus; }
    [[nodiscard]] std::int64_t residue() const { return _residue; }

    /// Throws domain_error if a letter is outside sigma.
    void validate( const alphabet& sigma ) const;
    /// Value on the letter counts of a word (counts indexed like sigma).
    [[nodiscard]] bool eval( const count_vector& counts, const alphabet& sigma ) const;

private:
    kind _kind = kind::conjunction;
    std::vector<counting_constraint> _parts;
    std::vector<std::pair<char, std::int64_t>> _coefs;
    std::int64_t _constant = 0;
    char _letter = 0;
    std::int64_t _modulus = 1;
    std::int64_t _residue = 0;
};

/// LTL(C,+) formula whose value at position 0 is the constraint on the word's
/// letter counts: congruences become @mod(c,k)(->#a), inequalities
/// [sum coef*->#a + const*<-#true >= 0] (<-#true is 1 at position 0).
formula constraint_to_formula( const counting_constraint& c, const alphabet& sigma );

/// True iff some rearrangement of w belongs to the base language.
/// Throws domain_error when |w| > max_len.
bool perm_closure_member( std::string_view w, const membership& base, std::size_t max_len );

/// F(@primeshift & !X true) over {a}: the length is prime.
formula prime_example_formula();

// Documents (JSON syntax).
linear_set linear_set_from_json( const nlohmann::ordered_json& doc );
/// Accepts {"union": [...]} or a single linear set.
semilinear_set semilinear_set_from_json( const nlohmann::ordered_json& doc );
counting_constraint constraint_from_json( const nlohmann::ordered_json& doc );
nlohmann::ordered_json to_json( const linear_set& s );
nlohmann::ordered_json to_json( const counting_constraint& c );

} // namespace hac
