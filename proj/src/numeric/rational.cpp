#include "hac/rational.hpp"

#include <cctype>
#include <limits>

#include "hac/error.hpp"

namespace hac
{

namespace
{

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t small_min = std::numeric_limits<std::int64_t>::min() + 1;
constexpr std::int64_t small_max = std::numeric_limits<std::int64_t>::max();

u128 gcd128( u128 a, u128 b )
{
    while ( b != 0 )
    {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u128 abs128( i128 x )
{
    return x < 0 ? static_cast<u128>( -x ) : static_cast<u128>( x );
}

bool fits_small( i128 x )
{
    return x >= small_min && x <= small_max;
}

mpz_class to_mpz( i128 x )
{
    const bool negative = x < 0;
    u128 magnitude = abs128( x );
    mpz_class result{ static_cast<unsigned long>( magnitude >> 64 ) };
    result <<= 64;
    result += mpz_class{ static_cast<unsigned long>( magnitude & 0xFFFFFFFFFFFFFFFFull ) };
    return negative ? mpz_class{ -result } : result;
}

} // namespace

rational::rational( std::int64_t value )
{
    if ( value >= small_min )
    {
        _num = value;
        return;
    }
    assign_big( mpq_class{ mpz_class{ static_cast<long>( value ) } } );
}

rational::rational( std::int64_t numerator, std::int64_t denominator )
{
    if ( denominator == 0 )
    {
        throw domain_error( "rational with zero denominator" );
    }
    mpq_class q{ mpz_class{ static_cast<long>( numerator ) }, mpz_class{ static_cast<long>( denominator ) } };
    q.canonicalize();
    assign_big( std::move( q ) );
}

rational::rational( const mpq_class& value )
{
    mpq_class q = value;
    q.canonicalize();
    assign_big( std::move( q ) );
}

rational::rational( const rational& other )
    : _num{ other._num }, _den{ other._den },
      _big{ other._big ? std::make_unique<mpq_class>( *other._big ) : nullptr }
{
}

rational& rational::operator=( const rational& other )
{
    if ( this != &other )
    {
        _num = other._num;
        _den = other._den;
        _big = other._big ? std::make_unique<mpq_class>( *other._big ) : nullptr;
    }
    return *this;
}

void rational::assign_big( mpq_class value )
{
    const mpz_class& n = value.get_num();
    const mpz_class& d = value.get_den();
    if ( n.fits_slong_p() && d.fits_slong_p() && n.get_si() >= small_min )
    {
        _num = n.get_si();
        _den = d.get_si();
        _big.reset();
        return;
    }
    _num = 0;
    _den = 1;
    _big = std::make_unique<mpq_class>( std::move( value ) );
}

rational rational::from_wide( i128 num, i128 den )
{
    if ( den < 0 )
    {
        num = -num;
        den = -den;
    }
    const u128 g = gcd128( abs128( num ), static_cast<u128>( den ) );
    if ( g > 1 )
    {
        num /= static_cast<i128>( g );
        den /= static_cast<i128>( g );
    }
    if ( fits_small( num ) && fits_small( den ) )
    {
        rational r;
        r._num = static_cast<std::int64_t>( num );
        r._den = static_cast<std::int64_t>( den );
        return r;
    }
    return rational{ mpq_class{ to_mpz( num ), to_mpz( den ) } };
}

rational rational::parse( std::string_view text )
{
    auto bad = [&]() { return format_error( "malformed rational \"" + std::string{ text } + "\"" ); };
    if ( text.empty() )
    {
        throw bad();
    }
    const auto slash = text.find( '/' );
    const std::string_view num_text = text.substr( 0, slash );
    const std::string_view den_text = slash == std::string_view::npos ? std::string_view{ "1" } : text.substr( slash + 1 );
    auto valid_integer = []( std::string_view s, bool allow_sign ) {
        std::size_t start = 0;
        if ( allow_sign && !s.empty() && s[0] == '-' )
        {
            start = 1;
        }
        if ( start >= s.size() )
        {
            return false;
        }
        for ( std::size_t k = start; k < s.size(); ++k )
        {
            if ( !std::isdigit( static_cast<unsigned char>( s[k] ) ) )
            {
                return false;
            }
        }
        return true;
    };
    if ( !valid_integer( num_text, true ) || !valid_integer( den_text, false ) )
    {
        throw bad();
    }
    mpz_class num{ std::string{ num_text } };
    mpz_class den{ std::string{ den_text } };
    if ( den == 0 )
    {
        throw bad();
    }
    return rational{ mpq_class{ num, den } };
}

std::string rational::str() const
{
    if ( _big )
    {
        return _big->get_str();
    }
    if ( _den == 1 )
    {
        return std::to_string( _num );
    }
    return std::to_string( _num ) + "/" + std::to_string( _den );
}

int rational::sign() const
{
    if ( _big )
    {
        return sgn( *_big );
    }
    return ( _num > 0 ) - ( _num < 0 );
}

bool rational::is_integer() const
{
    return _big ? _big->get_den() == 1 : _den == 1;
}

double rational::to_double() const
{
    if ( _big )
    {
        return _big->get_d();
    }
    return static_cast<double>( _num ) / static_cast<double>( _den );
}

mpq_class rational::to_mpq() const
{
    if ( _big )
    {
        return *_big;
    }
    return mpq_class{ mpz_class{ static_cast<long>( _num ) }, mpz_class{ static_cast<long>( _den ) } };
}

std::int64_t rational::to_int64() const
{
    if ( _big || _den != 1 )
    {
        throw domain_error( "rational " + str() + " is not a 64-bit integer" );
    }
    return _num;
}

rational rational::floor() const
{
    if ( !_big )
    {
        std::int64_t q = _num / _den;
        if ( _num % _den != 0 && _num < 0 )
        {
            --q;
        }
        return rational{ q };
    }
    mpz_class q;
    mpz_fdiv_q( q.get_mpz_t(), _big->get_num_mpz_t(), _big->get_den_mpz_t() );
    return rational{ mpq_class{ q } };
}

rational rational::abs() const
{
    return sign() < 0 ? -*this : *this;
}

rational rational::pow2( int exponent )
{
    mpz_class p = 1;
    const unsigned long magnitude = static_cast<unsigned long>( exponent < 0 ? -exponent : exponent );
    mpz_mul_2exp( p.get_mpz_t(), p.get_mpz_t(), magnitude );
    return exponent >= 0 ? rational{ mpq_class{ p } } : rational{ mpq_class{ mpz_class{ 1 }, p } };
}

rational rational::operator-() const
{
    if ( _big )
    {
        return rational{ mpq_class{ -*_big } };
    }
    rational r;
    r._num = -_num;
    r._den = _den;
    return r;
}

rational operator+( const rational& a, const rational& b )
{
    if ( !a._big && !b._big )
    {
        if ( a._den == 1 && b._den == 1 )
        {
            const i128 s = static_cast<i128>( a._num ) + b._num;
            if ( fits_small( s ) )
            {
                return rational{ static_cast<std::int64_t>( s ) };
            }
        }
        return rational::from_wide( static_cast<i128>( a._num ) * b._den + static_cast<i128>( b._num ) * a._den,
                                    static_cast<i128>( a._den ) * b._den );
    }
    return rational{ mpq_class{ a.to_mpq() + b.to_mpq() } };
}

rational operator-( const rational& a, const rational& b )
{
    return a + ( -b );
}

rational operator*( const rational& a, const rational& b )
{
    if ( !a._big && !b._big )
    {
        if ( a._den == 1 && b._den == 1 )
        {
            const i128 p = static_cast<i128>( a._num ) * b._num;
            if ( fits_small( p ) )
            {
                return rational{ static_cast<std::int64_t>( p ) };
            }
        }
        return rational::from_wide( static_cast<i128>( a._num ) * b._num, static_cast<i128>( a._den ) * b._den );
    }
    return rational{ mpq_class{ a.to_mpq() * b.to_mpq() } };
}

rational operator/( const rational& a, const rational& b )
{
    if ( b.is_zero() )
    {
        throw domain_error( "division by zero" );
    }
    if ( !a._big && !b._big )
    {
        return rational::from_wide( static_cast<i128>( a._num ) * b._den, static_cast<i128>( a._den ) * b._num );
    }
    return rational{ mpq_class{ a.to_mpq() / b.to_mpq() } };
}

bool operator==( const rational& a, const rational& b )
{
    if ( !a._big && !b._big )
    {
        return a._num == b._num && a._den == b._den;
    }
    if ( a._big && b._big )
    {
        return *a._big == *b._big;
    }
    return false; // canonical forms differ in representation only when values differ
}

std::strong_ordering operator<=>( const rational& a, const rational& b )
{
    if ( !a._big && !b._big )
    {
        const i128 lhs = static_cast<i128>( a._num ) * b._den;
        const i128 rhs = static_cast<i128>( b._num ) * a._den;
        return lhs <=> rhs;
    }
    const int c = cmp( a.to_mpq(), b.to_mpq() );
    return c <=> 0;
}

} // namespace hac
