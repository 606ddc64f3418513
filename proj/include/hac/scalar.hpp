#pragma once

#include <string>
#include <vector>

#include "hac/bigfloat.hpp"
#include "hac/rational.hpp"

namespace hac
{

/// One transcendental component `coef * cos(angle * pi)`.
struct cos_term
{
    rational angle; ///< canonical: 0 < angle < 1/2, angle != 1/3
    rational coef;  ///< never zero

    friend bool operator==( const cos_term&, const cos_term& ) = default;
};

/// Exact real of the form c + sum_k a_k cos(q_k pi) with rational c, a_k, q_k.
///
/// The set is a ring: products are folded back with the product-to-sum
/// identities, and sin(q pi) is stored as cos((1/2 - q) pi). Every value the
/// runtime manipulates is a scalar, so attention scores built from cos/sin
/// positional components stay exact; only sign decisions go through MPFR.
///
/// Representation is canonical per term (angles reduced into (0, 1/2), the
/// rational cosines of Niven's theorem folded into the constant), so equal
/// representations imply equal values. The converse does not hold in general.
class scalar
{
public:
    scalar() = default;
    scalar( rational constant ); // NOLINT(google-explicit-constructor)
    scalar( std::int64_t constant ) : scalar( rational{ constant } ) {} // NOLINT(google-explicit-constructor)

    static scalar cos_pi( const rational& angle );
    static scalar sin_pi( const rational& angle );

    [[nodiscard]] bool is_rational() const { return _terms.empty(); }
    [[nodiscard]] bool is_zero() const { return _terms.empty() && _constant.is_zero(); }
    [[nodiscard]] const rational& constant() const { return _constant; }
    [[nodiscard]] const std::vector<cos_term>& terms() const { return _terms; }

    scalar operator-() const;
    friend scalar operator+( const scalar& a, const scalar& b );
    friend scalar operator-( const scalar& a, const scalar& b );
    friend scalar operator*( const scalar& a, const scalar& b );
    friend scalar operator*( const scalar& a, const rational& b );
    scalar& operator+=( const scalar& b );

    /// Representation equality (implies value equality).
    friend bool operator==( const scalar&, const scalar& ) = default;

    /// Interval containing the exact value; the radius is below 2^-(bits+16).
    [[nodiscard]] enclosure enclose( mpfr_prec_t bits ) const;
    [[nodiscard]] double approx() const;
    [[nodiscard]] std::string str() const;

private:
    void add_cos( const rational& angle, const rational& coef );

    rational _constant;
    std::vector<cos_term> _terms;
};

/// Certified sign of `value`. Rational values are decided exactly; otherwise
/// the value is enclosed at `bits`, doubling while the enclosure straddles zero.
/// Throws precision_error once `max_bits` is exceeded. `escalations`, when
/// given, is incremented once per doubling.
int certified_sign( const scalar& value, mpfr_prec_t bits, mpfr_prec_t max_bits, int* escalations = nullptr );

} // namespace hac
