#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hac/compiler.hpp"
#include "hac/formula.hpp"
#include "hac/runtime.hpp"

namespace hac
{

/// Words of length `len` over sigma, index 0..|sigma|^len - 1 in lexicographic order.
std::string nth_word( const alphabet& sigma, std::size_t len, std::uint64_t index );
/// Number of words of length min_len..max_len.
std::uint64_t word_count( const alphabet& sigma, std::size_t min_len, std::size_t max_len );

struct check_options
{
    std::size_t min_len = 1;
    std::size_t max_len = 8;
    unsigned workers = 1;
    /// Compare every ledger column with the oracle trace of its subformula.
    bool positionwise = true;
    /// Re-run every word at doubled precision.
    bool robustness = true;
};

struct position_mismatch
{
    std::string subformula;
    std::size_t position = 0;
    bool oracle = false;
    /// Exact model value (a bit when the model is sound).
    std::string model;
};

/// Everything that went wrong on one word.
struct word_mismatch
{
    std::string word;
    bool oracle = false;
    std::optional<bool> model; ///< empty when the run failed
    std::string error;
    std::vector<position_mismatch> positions;
};

struct check_report
{
    std::string formula;
    std::string alphabet;
    std::size_t min_len = 0;
    std::size_t max_len = 0;
    std::uint64_t words_tested = 0;
    std::vector<word_mismatch> mismatches;
    /// Smallest attention score gap over all runs (infinity if none).
    double min_gap = std::numeric_limits<double>::infinity();
    precision_policy precision;
    mpfr_prec_t max_bits_used = 0;
    int escalations = 0;
    /// Words where doubling the precision changed a selection or the decision.
    std::uint64_t robustness_changes = 0;
    /// Words with an attention gap below 2^-bits(n).
    std::uint64_t fragile_words = 0;
    /// Words with |<t, v_0>| != 1.
    std::uint64_t margin_violations = 0;

    [[nodiscard]] bool equivalent() const { return mismatches.empty(); }
    /// One JSON record per mismatching word, then a summary record.
    [[nodiscard]] std::string to_jsonl() const;
};

/// Runs `model` on every word of length min_len..max_len (length-lexicographic
/// order) and compares acceptance, and optionally every ledger column, with
/// the oracle. The report does not depend on the number of workers.
check_report check_model( const formula& phi, const encoder_model& model, const std::vector<ledger_entry>& ledger,
                          const check_options& options );

} // namespace hac
