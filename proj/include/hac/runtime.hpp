#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "hac/model.hpp"

namespace hac
{

using vec = std::vector<scalar>;
using sequence = std::vector<vec>;

/// One-hot block followed by the positional block, per position.
sequence embed( const encoder_model& model, std::string_view word );

/// Statistics of the attention decisions of one layer.
struct selection_stats
{
    /// Smallest (best score - best non-maximal score) over the positions that
    /// have a non-maximal candidate; infinity when there is none.
    double min_gap = std::numeric_limits<double>::infinity();
    /// Precision doublings needed to certify orderings.
    int escalations = 0;
};

/// Maximizers of <A v_i, B v_j> over j in 0..n-1 (0..i when masked): the
/// singleton {min} for unique, the full set for average. Ties are exact:
/// scores are compared through their symbolic forms, and orderings are
/// certified with interval arithmetic starting at `bits` and doubling up to
/// `max_bits` (precision_error beyond).
std::vector<std::size_t> attention_select( const affine_map& A, const affine_map& B, const sequence& seq, std::size_t i,
                                           selector sel, bool masked, mpfr_prec_t bits, mpfr_prec_t max_bits,
                                           selection_stats* stats = nullptr );

struct layer_trace
{
    bool attention = false;
    /// Per position, the selected set (attention layers only).
    std::vector<std::vector<std::size_t>> selections;
    selection_stats stats;
};

/// Applies one layer to a whole sequence. Throws model_error on width mismatch.
sequence apply_layer( const layer& l, sequence seq, mpfr_prec_t bits, mpfr_prec_t max_bits,
                      layer_trace* trace = nullptr );

struct run_options
{
    /// Keep the sequence after every layer (entry 0 is the embedding).
    bool keep_sequences = false;
    /// Working precision; defaults to the model's bits(n).
    std::optional<mpfr_prec_t> bits;
    /// Escalation ceiling as a multiple of the working precision.
    int max_bits_factor = 16;
};

struct run_result
{
    sequence output;
    std::vector<sequence> sequences;
    std::vector<layer_trace> layers;
    mpfr_prec_t bits = 0;
    /// <t, v_0>
    scalar score;
};

run_result run( const encoder_model& model, std::string_view word, const run_options& options = {} );

enum class decision
{
    reject,
    accept
};

/// Sign of <t, v_0>; a zero score is a model_error.
decision decide( const run_result& result, mpfr_prec_t max_bits );
decision accept( const encoder_model& model, std::string_view word );

struct robustness_report
{
    /// Every selection and the decision agree at bits(n) and 2 bits(n).
    bool unchanged = true;
    mpfr_prec_t bits = 0;
    mpfr_prec_t doubled_bits = 0;
    /// Per layer; infinity for ReLU layers and for layers without a non-maximal candidate.
    std::vector<double> min_gaps;
    /// Attention layers whose minimal gap is below 2^-bits(n).
    std::vector<std::size_t> fragile_layers;
    /// Layers whose selections differ between the two precisions.
    std::vector<std::size_t> changed_layers;
    bool decision_changed = false;
    /// The run at bits(n), for reuse by callers.
    run_result base;
};

/// Re-runs at doubled precision and compares. Exact-rational models are
/// trivially unchanged and are not re-run.
robustness_report robustness_check( const encoder_model& model, std::string_view word, const run_options& options = {} );

} // namespace hac
