#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace hac
{

/// Ordered set of single-character symbols. The order fixes the one-hot
/// coordinate of each symbol in compiled models.
///
/// Symbols are ASCII letters other than the operator letters X, U, F and G.
class alphabet
{
public:
    /// Throws domain_error when empty, duplicated, or containing a reserved character.
    explicit alphabet( std::string symbols );

    [[nodiscard]] const std::string& symbols() const { return _symbols; }
    [[nodiscard]] std::size_t size() const { return _symbols.size(); }
    [[nodiscard]] std::optional<std::size_t> index_of( char symbol ) const;
    [[nodiscard]] bool contains( char symbol ) const { return index_of( symbol ).has_value(); }

    /// Throws domain_error if `word` is empty or uses a symbol outside the alphabet.
    void validate_word( std::string_view word ) const;

    static bool is_valid_symbol( char c );

    friend bool operator==( const alphabet&, const alphabet& ) = default;

private:
    std::string _symbols;
};

} // namespace hac
