#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hac/alphabet.hpp"
#include "hac/formula.hpp"
#include "hac/model.hpp"

namespace hac
{

/// Where a subformula's indicator lives in the compiled model.
struct ledger_entry
{
    std::string subformula;
    /// 0-based coordinate (the model document stores it 1-based).
    std::size_t coord = 0;
    /// Number of layers after which the coordinate holds its final bits (0 = the embedding).
    std::size_t ready_after = 0;
};

struct compile_options
{
    /// Overrides the precision law; the mode defaults to exact when no
    /// cos/sin component is needed and to bigfloat otherwise.
    std::optional<std::int64_t> precision_a;
    std::optional<std::int64_t> precision_b;
    std::optional<numeric_mode> mode;
};

struct compiled_model
{
    encoder_model model;
    std::vector<ledger_entry> ledger;
    fragment kind;
    /// Coordinate of the root indicator and of 2 root - 1.
    std::size_t root_coord = 0;
    std::size_t output_coord = 0;
};

/// Compiles phi into an encoder accepting exactly L(phi): unique hard
/// attention for LTL(Mon), average hard attention (with masking) for
/// LTL(C,+). Every subformula's indicator gets a coordinate recorded in the
/// ledger; the acceptance vector reads 2 root - 1, so the score is +-1.
///
/// Throws domain_error for atoms outside `sigma`, model_error if the requested
/// mode is exact but the formula needs cos/sin components.
compiled_model compile( const formula& phi, const hac::alphabet& sigma, const compile_options& options = {} );

/// Ledger recorded in a compiled model's metadata (empty for foreign models).
std::vector<ledger_entry> ledger_of( const encoder_model& model );

/// Positional components the compiler declares for phi, in embedding order.
std::vector<positional_component> required_positional( const formula& phi );

} // namespace hac
