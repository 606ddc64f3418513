#pragma once

#include <mpfr.h>

#include "hac/rational.hpp"

namespace hac
{

/// Owning wrapper around an MPFR value. Precision is fixed at construction.
class bigfloat
{
public:
    explicit bigfloat( mpfr_prec_t precision );
    bigfloat( mpfr_prec_t precision, const rational& value, mpfr_rnd_t rounding = MPFR_RNDN );
    bigfloat( const bigfloat& other );
    bigfloat( bigfloat&& other ) noexcept;
    bigfloat& operator=( const bigfloat& other );
    bigfloat& operator=( bigfloat&& other ) noexcept;
    ~bigfloat();

    [[nodiscard]] mpfr_ptr get() { return _value; }
    [[nodiscard]] mpfr_srcptr get() const { return _value; }
    [[nodiscard]] mpfr_prec_t precision() const { return mpfr_get_prec( _value ); }
    [[nodiscard]] double to_double() const { return mpfr_get_d( _value, MPFR_RNDN ); }
    [[nodiscard]] int sign() const { return mpfr_sgn( _value ); }

private:
    mpfr_t _value;
};

/// Closed interval [mid - radius, mid + radius] certified to contain an exact value.
struct enclosure
{
    bigfloat mid;
    bigfloat radius;

    [[nodiscard]] bool certainly_less( const enclosure& other ) const;
    [[nodiscard]] bool overlaps( const enclosure& other ) const;
    /// +1 / -1 when the interval excludes zero, 0 when it straddles zero.
    [[nodiscard]] int certified_sign() const;
};

} // namespace hac
