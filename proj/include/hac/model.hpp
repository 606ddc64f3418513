#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hac/alphabet.hpp"
#include "hac/predicate.hpp"
#include "hac/rational.hpp"
#include "hac/scalar.hpp"

namespace hac
{

/// x -> M x + bias over exact rationals. Stored row-sparse; the dense view is
/// what the model file format exposes.
class affine_map
{
public:
    using entry = std::pair<std::size_t, rational>;

    affine_map() = default;
    /// The zero map from `cols` to `rows` dimensions.
    affine_map( std::size_t rows, std::size_t cols );

    static affine_map from_dense( const std::vector<std::vector<rational>>& matrix, std::vector<rational> bias,
                                  std::size_t cols );

    [[nodiscard]] std::size_t rows() const { return _rows.size(); }
    [[nodiscard]] std::size_t cols() const { return _cols; }

    [[nodiscard]] rational at( std::size_t r, std::size_t c ) const;
    [[nodiscard]] const rational& bias( std::size_t r ) const { return _bias.at( r ); }
    /// Non-zero entries of row r, ordered by column.
    [[nodiscard]] const std::vector<entry>& row( std::size_t r ) const { return _rows.at( r ); }

    void set( std::size_t r, std::size_t c, const rational& value );
    void add( std::size_t r, std::size_t c, const rational& value );
    void set_bias( std::size_t r, const rational& value );
    /// Appends a zero row and returns its index.
    std::size_t add_row();

    /// Row r is identically zero (matrix row and bias).
    [[nodiscard]] bool row_is_zero( std::size_t r ) const { return _rows.at( r ).empty() && _bias.at( r ).is_zero(); }
    [[nodiscard]] bool is_zero() const;

    /// Row r applied to x (x.size() must equal cols()).
    [[nodiscard]] scalar apply_row( std::size_t r, const std::vector<scalar>& x ) const;
    [[nodiscard]] std::vector<scalar> apply( const std::vector<scalar>& x ) const;

    friend bool operator==( const affine_map&, const affine_map& ) = default;

private:
    std::size_t _cols = 0;
    std::vector<std::vector<entry>> _rows;
    std::vector<rational> _bias;
};

enum class selector
{
    unique, ///< minimal index among the maximizers
    average ///< uniform mean over all maximizers
};

/// a_i from the maximizers of <A v_i, B v_j>; output C(v_i, a_i).
/// A, B : d -> d and C : 2d -> e. With `masked`, j ranges over 0..i only.
struct attention_layer
{
    affine_map A;
    affine_map B;
    affine_map C;
    hac::selector selector = selector::unique;
    bool masked = false;

    friend bool operator==( const attention_layer&, const attention_layer& ) = default;
};

/// Replaces coordinate `coord` (1-based) by max(0, .).
struct relu_layer
{
    std::size_t coord = 1;

    friend bool operator==( const relu_layer&, const relu_layer& ) = default;
};

using layer = std::variant<attention_layer, relu_layer>;

enum class positional_kind
{
    index,         ///< i
    index_squared, ///< i^2
    inv_index,     ///< 1/(i+1)
    alt_sign,      ///< (-1)^i
    cos_geo,       ///< cos(pi (1 - 2^-i) / 10)
    sin_geo,       ///< sin(pi (1 - 2^-i) / 10)
    pred,          ///< theta_n(i)
    pred_at_n      ///< theta_n(n), the same at every position
};

struct positional_component
{
    positional_kind kind = positional_kind::index;
    std::optional<unary_predicate> predicate; // pred, pred_at_n

    static positional_component of( positional_kind kind ) { return { kind, std::nullopt }; }
    static positional_component pred( unary_predicate p ) { return { positional_kind::pred, std::move( p ) }; }
    static positional_component pred_at_n( unary_predicate p ) { return { positional_kind::pred_at_n, std::move( p ) }; }

    [[nodiscard]] bool is_transcendental() const
    {
        return kind == positional_kind::cos_geo || kind == positional_kind::sin_geo;
    }

    /// p(i, n) for 0 <= i < n.
    [[nodiscard]] scalar eval( std::int64_t n, std::int64_t i ) const;

    /// "index", "cos_geo", "pred(@even)", "pred_at_n(@mod(2,0))", ...
    [[nodiscard]] std::string str() const;

    friend bool operator==( const positional_component& a, const positional_component& b );
};

enum class numeric_mode
{
    bigfloat,
    exact
};

/// Working precision bits(n) = max(a n + b, floor). The floor is 64, raised by
/// the HAC_PRECISION_BITS environment variable.
struct precision_policy
{
    std::int64_t a = 4;
    std::int64_t b = 64;
    numeric_mode mode = numeric_mode::bigfloat;

    [[nodiscard]] mpfr_prec_t bits( std::size_t n ) const;
    static mpfr_prec_t floor_bits();

    friend bool operator==( const precision_policy&, const precision_policy& ) = default;
};

std::string to_string( numeric_mode mode );
/// Accepts "bigfloat", "exact" and "exact-rational".
numeric_mode parse_mode( const std::string& text );

/// An encoder: embedding (one-hot block followed by the positional block),
/// layers, acceptance vector t. Validated on construction, immutable after.
class encoder_model
{
public:
    encoder_model( hac::alphabet sigma, std::vector<positional_component> positional, std::vector<layer> layers,
                   std::vector<rational> acceptance, precision_policy precision = {},
                   nlohmann::ordered_json metadata = nlohmann::ordered_json::object() );

    [[nodiscard]] const hac::alphabet& alphabet() const { return _alphabet; }
    [[nodiscard]] const std::vector<positional_component>& positional() const { return _positional; }
    [[nodiscard]] const std::vector<layer>& layers() const { return _layers; }
    [[nodiscard]] const std::vector<rational>& acceptance() const { return _acceptance; }
    [[nodiscard]] const precision_policy& precision() const { return _precision; }
    [[nodiscard]] const nlohmann::ordered_json& metadata() const { return _metadata; }

    [[nodiscard]] std::size_t input_width() const { return _alphabet.size() + _positional.size(); }
    /// Width of the sequence entering layer k; width_before(layers().size()) is the output width.
    [[nodiscard]] std::size_t width_before( std::size_t k ) const { return _widths.at( k ); }
    [[nodiscard]] std::size_t output_width() const { return _widths.back(); }

    [[nodiscard]] bool uses_transcendentals() const;

    /// Same model under another precision policy (validated again).
    [[nodiscard]] encoder_model with_precision( precision_policy precision ) const;
    /// Same model with another acceptance vector (validated again).
    [[nodiscard]] encoder_model with_acceptance( std::vector<rational> acceptance ) const;

    friend bool operator==( const encoder_model& a, const encoder_model& b );

private:
    hac::alphabet _alphabet;
    std::vector<positional_component> _positional;
    std::vector<layer> _layers;
    std::vector<rational> _acceptance;
    precision_policy _precision;
    nlohmann::ordered_json _metadata;
    std::vector<std::size_t> _widths;
};

} // namespace hac
