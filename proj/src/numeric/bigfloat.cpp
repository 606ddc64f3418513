#include "hac/bigfloat.hpp"

#include <algorithm>
#include <utility>

namespace hac
{

bigfloat::bigfloat( mpfr_prec_t precision )
{
    mpfr_init2( _value, precision );
    mpfr_set_zero( _value, 1 );
}

bigfloat::bigfloat( mpfr_prec_t precision, const rational& value, mpfr_rnd_t rounding )
{
    mpfr_init2( _value, precision );
    const mpq_class q = value.to_mpq();
    mpfr_set_q( _value, q.get_mpq_t(), rounding );
}

bigfloat::bigfloat( const bigfloat& other )
{
    mpfr_init2( _value, other.precision() );
    mpfr_set( _value, other._value, MPFR_RNDN );
}

bigfloat::bigfloat( bigfloat&& other ) noexcept
{
    mpfr_init2( _value, other.precision() );
    mpfr_swap( _value, other._value );
}

bigfloat& bigfloat::operator=( const bigfloat& other )
{
    if ( this != &other )
    {
        mpfr_set_prec( _value, other.precision() );
        mpfr_set( _value, other._value, MPFR_RNDN );
    }
    return *this;
}

bigfloat& bigfloat::operator=( bigfloat&& other ) noexcept
{
    mpfr_swap( _value, other._value );
    return *this;
}

bigfloat::~bigfloat()
{
    mpfr_clear( _value );
}

bool enclosure::certainly_less( const enclosure& other ) const
{
    // this.hi < other.lo, evaluated with outward rounding
    const mpfr_prec_t p = std::max( mid.precision(), other.mid.precision() ) + 8;
    bigfloat hi( p );
    bigfloat lo( p );
    mpfr_add( hi.get(), mid.get(), radius.get(), MPFR_RNDU );
    mpfr_sub( lo.get(), other.mid.get(), other.radius.get(), MPFR_RNDD );
    return mpfr_less_p( hi.get(), lo.get() ) != 0;
}

bool enclosure::overlaps( const enclosure& other ) const
{
    return !certainly_less( other ) && !other.certainly_less( *this );
}

int enclosure::certified_sign() const
{
    const mpfr_prec_t p = mid.precision() + 8;
    bigfloat lo( p );
    bigfloat hi( p );
    mpfr_sub( lo.get(), mid.get(), radius.get(), MPFR_RNDD );
    mpfr_add( hi.get(), mid.get(), radius.get(), MPFR_RNDU );
    if ( lo.sign() > 0 )
    {
        return 1;
    }
    if ( hi.sign() < 0 )
    {
        return -1;
    }
    return 0;
}

} // namespace hac
