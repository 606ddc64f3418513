#include "hac/scalar.hpp"

#include <algorithm>
#include <map>

#include "hac/error.hpp"

namespace hac
{

namespace
{

const rational one_third{ 1, 3 };
const rational one_half{ 1, 2 };

// Reduces q into [0, 1] with cos(q pi) unchanged.
rational reduce_angle( const rational& q )
{
    rational r = q - rational{ 2 } * ( q / rational{ 2 } ).floor();
    if ( r > rational{ 1 } )
    {
        r = rational{ 2 } - r;
    }
    return r;
}

const bigfloat& pi_at( mpfr_prec_t precision )
{
    thread_local std::map<mpfr_prec_t, bigfloat> cache;
    auto it = cache.find( precision );
    if ( it == cache.end() )
    {
        bigfloat pi( precision );
        mpfr_const_pi( pi.get(), MPFR_RNDN );
        it = cache.emplace( precision, std::move( pi ) ).first;
    }
    return it->second;
}

} // namespace

scalar::scalar( rational constant ) : _constant{ std::move( constant ) } {}

scalar scalar::cos_pi( const rational& angle )
{
    scalar s;
    s.add_cos( angle, rational{ 1 } );
    return s;
}

scalar scalar::sin_pi( const rational& angle )
{
    return cos_pi( one_half - angle );
}

void scalar::add_cos( const rational& angle, const rational& coef )
{
    if ( coef.is_zero() )
    {
        return;
    }
    rational r = reduce_angle( angle );
    rational c = coef;
    // cos((1 - q) pi) = -cos(q pi): keep angles in [0, 1/2]
    if ( r > one_half )
    {
        r = rational{ 1 } - r;
        c = -c;
    }
    // Niven: the only rational values of cos(q pi) for rational q
    if ( r.is_zero() )
    {
        _constant += c;
        return;
    }
    if ( r == one_half )
    {
        return;
    }
    if ( r == one_third )
    {
        _constant += c * one_half;
        return;
    }
    auto it = std::lower_bound( _terms.begin(), _terms.end(), r,
                                []( const cos_term& t, const rational& a ) { return t.angle < a; } );
    if ( it != _terms.end() && it->angle == r )
    {
        it->coef += c;
        if ( it->coef.is_zero() )
        {
            _terms.erase( it );
        }
        return;
    }
    _terms.insert( it, cos_term{ r, c } );
}

scalar scalar::operator-() const
{
    scalar s;
    s._constant = -_constant;
    s._terms = _terms;
    for ( auto& t : s._terms )
    {
        t.coef = -t.coef;
    }
    return s;
}

scalar& scalar::operator+=( const scalar& b )
{
    _constant += b._constant;
    for ( const auto& t : b._terms )
    {
        add_cos( t.angle, t.coef );
    }
    return *this;
}

scalar operator+( const scalar& a, const scalar& b )
{
    if ( a._terms.empty() && b._terms.empty() )
    {
        return scalar{ a._constant + b._constant };
    }
    scalar s = a;
    s += b;
    return s;
}

scalar operator-( const scalar& a, const scalar& b )
{
    if ( a._terms.empty() && b._terms.empty() )
    {
        return scalar{ a._constant - b._constant };
    }
    return a + ( -b );
}

scalar operator*( const scalar& a, const rational& b )
{
    if ( b.is_zero() )
    {
        return scalar{};
    }
    scalar s;
    s._constant = a._constant * b;
    s._terms = a._terms;
    for ( auto& t : s._terms )
    {
        t.coef *= b;
    }
    return s;
}

scalar operator*( const scalar& a, const scalar& b )
{
    if ( b._terms.empty() )
    {
        return a * b._constant;
    }
    if ( a._terms.empty() )
    {
        return b * a._constant;
    }
    scalar s;
    s._constant = a._constant * b._constant;
    for ( const auto& t : b._terms )
    {
        s.add_cos( t.angle, t.coef * a._constant );
    }
    for ( const auto& t : a._terms )
    {
        s.add_cos( t.angle, t.coef * b._constant );
    }
    // cos x cos y = (cos(x - y) + cos(x + y)) / 2
    for ( const auto& ta : a._terms )
    {
        for ( const auto& tb : b._terms )
        {
            const rational c = ta.coef * tb.coef * one_half;
            s.add_cos( ta.angle - tb.angle, c );
            s.add_cos( ta.angle + tb.angle, c );
        }
    }
    return s;
}

enclosure scalar::enclose( mpfr_prec_t bits ) const
{
    const mpfr_prec_t work = bits + 32;
    bigfloat mid( work, _constant );
    bigfloat magnitude( 64, _constant.abs(), MPFR_RNDU );
    if ( !_terms.empty() )
    {
        const bigfloat& pi = pi_at( work + 8 );
        bigfloat x( work + 8 );
        bigfloat term( work );
        for ( const auto& t : _terms )
        {
            const mpq_class angle = t.angle.to_mpq();
            const mpq_class coef = t.coef.to_mpq();
            mpfr_mul_q( x.get(), pi.get(), angle.get_mpq_t(), MPFR_RNDN );
            mpfr_cos( term.get(), x.get(), MPFR_RNDN );
            mpfr_mul_q( term.get(), term.get(), coef.get_mpq_t(), MPFR_RNDN );
            mpfr_add( mid.get(), mid.get(), term.get(), MPFR_RNDN );
            bigfloat c( 64, t.coef.abs(), MPFR_RNDU );
            mpfr_add( magnitude.get(), magnitude.get(), c.get(), MPFR_RNDU );
        }
    }
    // Each of the O(m) roundings at `work` bits is bounded by a few ulps of the
    // running magnitude; (m + 2)^2 (S + 1) 2^-(bits + 24) dominates their sum.
    bigfloat radius( 64 );
    if ( !_terms.empty() )
    {
        const double m = static_cast<double>( _terms.size() ) + 2.0;
        mpfr_add_ui( radius.get(), magnitude.get(), 1, MPFR_RNDU );
        mpfr_mul_d( radius.get(), radius.get(), m * m, MPFR_RNDU );
        mpfr_div_2si( radius.get(), radius.get(), bits + 24, MPFR_RNDU );
    }
    else
    {
        // only the final rounding of the constant
        mpfr_add_ui( radius.get(), magnitude.get(), 1, MPFR_RNDU );
        mpfr_div_2si( radius.get(), radius.get(), work - 1, MPFR_RNDU );
    }
    return enclosure{ std::move( mid ), std::move( radius ) };
}

double scalar::approx() const
{
    if ( _terms.empty() )
    {
        return _constant.to_double();
    }
    return enclose( 64 ).mid.to_double();
}

std::string scalar::str() const
{
    std::string out;
    if ( !_constant.is_zero() || _terms.empty() )
    {
        out = _constant.str();
    }
    for ( const auto& t : _terms )
    {
        if ( !out.empty() )
        {
            out += " + ";
        }
        out += t.coef.str() + "*cos(" + t.angle.str() + "*pi)";
    }
    return out;
}

int certified_sign( const scalar& value, mpfr_prec_t bits, mpfr_prec_t max_bits, int* escalations )
{
    if ( value.is_rational() )
    {
        return value.constant().sign();
    }
    for ( mpfr_prec_t p = bits;; p *= 2 )
    {
        const int s = value.enclose( p ).certified_sign();
        if ( s != 0 )
        {
            return s;
        }
        if ( p * 2 > max_bits )
        {
            throw precision_error( "sign of " + value.str() + " not certified at " + std::to_string( p ) + " bits" );
        }
        if ( escalations != nullptr )
        {
            ++*escalations;
        }
    }
}

} // namespace hac
