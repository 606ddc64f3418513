#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hac
{

/// Exact rational number. Values whose reduced numerator and denominator fit in
/// 64 bits are kept inline; anything larger moves to a GMP rational.
/// Invariant: always reduced, denominator positive.
class rational
{
public:
    rational() = default;
    rational( std::int64_t value ); // NOLINT(google-explicit-constructor)
    rational( std::int64_t numerator, std::int64_t denominator );
    explicit rational( const mpq_class& value );

    rational( const rational& other );
    rational( rational&& other ) noexcept = default;
    rational& operator=( const rational& other );
    rational& operator=( rational&& other ) noexcept = default;
    ~rational() = default;

    /// Parses "p", "-p" or "p/q". Throws format_error on anything else, including q = 0.
    static rational parse( std::string_view text );

    /// Canonical text: "p" for integers, otherwise "p/q" with q > 0 and gcd(p, q) = 1.
    [[nodiscard]] std::string str() const;

    [[nodiscard]] int sign() const;
    [[nodiscard]] bool is_zero() const { return sign() == 0; }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] bool is_small() const { return !_big; }
    [[nodiscard]] double to_double() const;
    [[nodiscard]] mpq_class to_mpq() const;
    /// Integer value; throws if not an integer or out of int64 range.
    [[nodiscard]] std::int64_t to_int64() const;

    /// Largest integer not above the value.
    [[nodiscard]] rational floor() const;
    [[nodiscard]] rational abs() const;

    /// 2^exponent for any (possibly negative) exponent.
    static rational pow2( int exponent );

    rational operator-() const;
    friend rational operator+( const rational& a, const rational& b );
    friend rational operator-( const rational& a, const rational& b );
    friend rational operator*( const rational& a, const rational& b );
    friend rational operator/( const rational& a, const rational& b );
    rational& operator+=( const rational& b ) { return *this = *this + b; }
    rational& operator-=( const rational& b ) { return *this = *this - b; }
    rational& operator*=( const rational& b ) { return *this = *this * b; }

    friend bool operator==( const rational& a, const rational& b );
    friend std::strong_ordering operator<=>( const rational& a, const rational& b );

private:
    void assign_big( mpq_class value );
    // Reduces num/den (den != 0) and picks the inline or GMP representation.
    static rational from_wide( __int128 num, __int128 den );

    std::int64_t _num = 0;
    std::int64_t _den = 1;
    std::unique_ptr<mpq_class> _big;
};

} // namespace hac
