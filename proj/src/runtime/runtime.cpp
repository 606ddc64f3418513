#include "hac/runtime.hpp"

#include <algorithm>
#include <cmath>

#include "hac/error.hpp"

namespace hac
{

namespace
{

// Sign of x - y, certified.
int compare_scores( const scalar& x, const scalar& y, mpfr_prec_t bits, mpfr_prec_t max_bits, int* escalations )
{
    if ( x.is_rational() && y.is_rational() )
    {
        const auto order = x.constant() <=> y.constant();
        return order < 0 ? -1 : ( order > 0 ? 1 : 0 );
    }
    if ( x == y )
    {
        return 0;
    }
    return certified_sign( x - y, bits, max_bits, escalations );
}

double gap_value( const scalar& gap, mpfr_prec_t bits )
{
    if ( gap.is_rational() )
    {
        return gap.constant().to_double();
    }
    return gap.enclose( bits ).mid.to_double();
}

int certified_sign_of( const scalar& value, mpfr_prec_t bits, mpfr_prec_t max_bits )
{
    if ( value.is_rational() )
    {
        return value.constant().sign();
    }
    return certified_sign( value, bits, max_bits );
}

// The query/key projections restricted to the rows that can contribute to a score.
struct projections
{
    std::vector<std::size_t> rows;
    std::vector<vec> queries;
    std::vector<vec> keys;
};

projections project( const affine_map& A, const affine_map& B, const sequence& seq )
{
    projections p;
    for ( std::size_t r = 0; r < A.rows(); ++r )
    {
        if ( !A.row_is_zero( r ) && !B.row_is_zero( r ) )
        {
            p.rows.push_back( r );
        }
    }
    if ( p.rows.empty() )
    {
        return p;
    }
    p.queries.reserve( seq.size() );
    p.keys.reserve( seq.size() );
    for ( const auto& v : seq )
    {
        vec q, k;
        for ( std::size_t r : p.rows )
        {
            q.push_back( A.apply_row( r, v ) );
            k.push_back( B.apply_row( r, v ) );
        }
        p.queries.push_back( std::move( q ) );
        p.keys.push_back( std::move( k ) );
    }
    return p;
}

std::vector<std::size_t> select( const projections& p, std::size_t n, std::size_t i, selector sel, bool masked,
                                 mpfr_prec_t bits, mpfr_prec_t max_bits, selection_stats* stats )
{
    const std::size_t end = masked ? i + 1 : n;
    std::vector<std::size_t> best;
    if ( p.rows.empty() )
    {
        // every score is exactly 0
        if ( sel == selector::unique )
        {
            return { 0 };
        }
        best.resize( end );
        for ( std::size_t j = 0; j < end; ++j )
        {
            best[j] = j;
        }
        return best;
    }

    std::vector<scalar> scores( end );
    for ( std::size_t j = 0; j < end; ++j )
    {
        scalar s;
        for ( std::size_t t = 0; t < p.rows.size(); ++t )
        {
            const scalar& q = p.queries[i][t];
            const scalar& k = p.keys[j][t];
            if ( !q.is_zero() && !k.is_zero() )
            {
                s += q * k;
            }
        }
        scores[j] = std::move( s );
    }

    int escalations = 0;
    best.push_back( 0 );
    for ( std::size_t j = 1; j < end; ++j )
    {
        const int c = compare_scores( scores[j], scores[best.front()], bits, max_bits, &escalations );
        if ( c > 0 )
        {
            best.assign( 1, j );
        }
        else if ( c == 0 )
        {
            best.push_back( j );
        }
    }

    if ( stats )
    {
        stats->escalations += escalations;
        const scalar& top = scores[best.front()];
        std::size_t next_max = 0;
        for ( std::size_t j = 0; j < end; ++j )
        {
            if ( next_max < best.size() && best[next_max] == j )
            {
                ++next_max;
                continue;
            }
            stats->min_gap = std::min( stats->min_gap, gap_value( top - scores[j], bits ) );
        }
    }

    if ( sel == selector::unique )
    {
        best.resize( 1 );
    }
    return best;
}

// Output rows of C that merely copy v_i: rows 0..p-1 with C[r] = e_r.
std::size_t identity_prefix( const affine_map& C, std::size_t d )
{
    std::size_t p = 0;
    while ( p < C.rows() && p < d )
    {
        const auto& row = C.row( p );
        if ( row.size() != 1 || row.front().first != p || row.front().second != rational{ 1 } || !C.bias( p ).is_zero() )
        {
            break;
        }
        ++p;
    }
    return p;
}

scalar apply_split_row( const affine_map& C, std::size_t r, const vec& v, const vec& a )
{
    const std::size_t d = v.size();
    scalar out{ C.bias( r ) };
    for ( const auto& [c, value] : C.row( r ) )
    {
        const scalar& x = c < d ? v[c] : a[c - d];
        if ( !x.is_zero() )
        {
            out += x * value;
        }
    }
    return out;
}

sequence apply_attention( const attention_layer& layer, sequence seq, mpfr_prec_t bits, mpfr_prec_t max_bits,
                          layer_trace* trace )
{
    const std::size_t n = seq.size();
    const std::size_t d = layer.A.cols();

    std::vector<std::size_t> attended_cols;
    for ( std::size_t r = 0; r < layer.C.rows(); ++r )
    {
        for ( const auto& e : layer.C.row( r ) )
        {
            if ( e.first >= d )
            {
                attended_cols.push_back( e.first - d );
            }
        }
    }
    std::sort( attended_cols.begin(), attended_cols.end() );
    attended_cols.erase( std::unique( attended_cols.begin(), attended_cols.end() ), attended_cols.end() );

    const projections p = project( layer.A, layer.B, seq );
    const std::size_t prefix = identity_prefix( layer.C, d );
    const vec zero_attended( d );

    std::vector<vec> extra( n );
    selection_stats stats;
    if ( trace )
    {
        trace->attention = true;
        trace->selections.assign( n, {} );
    }
    for ( std::size_t i = 0; i < n; ++i )
    {
        const auto selected = select( p, n, i, layer.selector, layer.masked, bits, max_bits, trace ? &stats : nullptr );
        const vec* attended = &zero_attended;
        vec mean;
        if ( !attended_cols.empty() )
        {
            if ( selected.size() == 1 )
            {
                attended = &seq[selected.front()];
            }
            else
            {
                mean.assign( d, scalar{} );
                const rational weight{ 1, static_cast<std::int64_t>( selected.size() ) };
                for ( std::size_t c : attended_cols )
                {
                    scalar sum;
                    for ( std::size_t j : selected )
                    {
                        sum += seq[j][c];
                    }
                    mean[c] = sum * weight;
                }
                attended = &mean;
            }
        }
        vec& out = extra[i];
        out.reserve( layer.C.rows() - prefix );
        for ( std::size_t r = prefix; r < layer.C.rows(); ++r )
        {
            out.push_back( apply_split_row( layer.C, r, seq[i], *attended ) );
        }
        if ( trace )
        {
            trace->selections[i] = selected;
        }
    }
    if ( trace )
    {
        trace->stats = stats;
    }

    for ( std::size_t i = 0; i < n; ++i )
    {
        seq[i].resize( prefix );
        seq[i].insert( seq[i].end(), std::make_move_iterator( extra[i].begin() ), std::make_move_iterator( extra[i].end() ) );
    }
    return seq;
}

} // namespace

sequence embed( const encoder_model& model, std::string_view word )
{
    const auto& sigma = model.alphabet();
    sigma.validate_word( word );
    const auto n = static_cast<std::int64_t>( word.size() );
    sequence seq;
    seq.reserve( word.size() );
    for ( std::int64_t i = 0; i < n; ++i )
    {
        vec v( model.input_width() );
        v[*sigma.index_of( word[i] )] = scalar{ 1 };
        for ( std::size_t k = 0; k < model.positional().size(); ++k )
        {
            v[sigma.size() + k] = model.positional()[k].eval( n, i );
        }
        seq.push_back( std::move( v ) );
    }
    return seq;
}

std::vector<std::size_t> attention_select( const affine_map& A, const affine_map& B, const sequence& seq, std::size_t i,
                                           selector sel, bool masked, mpfr_prec_t bits, mpfr_prec_t max_bits,
                                           selection_stats* stats )
{
    if ( seq.empty() || i >= seq.size() )
    {
        throw domain_error( "attention position out of range" );
    }
    if ( A.cols() != seq.front().size() || B.cols() != seq.front().size() || A.rows() != B.rows() )
    {
        throw model_error( "attention maps do not match the sequence width" );
    }
    return select( project( A, B, seq ), seq.size(), i, sel, masked, bits, max_bits, stats );
}

sequence apply_layer( const layer& l, sequence seq, mpfr_prec_t bits, mpfr_prec_t max_bits, layer_trace* trace )
{
    if ( seq.empty() )
    {
        throw domain_error( "empty sequence" );
    }
    const std::size_t width = seq.front().size();
    if ( const auto* attn = std::get_if<attention_layer>( &l ) )
    {
        if ( attn->A.cols() != width || attn->A.rows() != width || attn->B.cols() != width ||
             attn->B.rows() != width || attn->C.cols() != 2 * width )
        {
            throw model_error( "attention layer does not accept width " + std::to_string( width ) );
        }
        return apply_attention( *attn, std::move( seq ), bits, max_bits, trace );
    }
    const auto& relu = std::get<relu_layer>( l );
    if ( relu.coord < 1 || relu.coord > width )
    {
        throw model_error( "relu coordinate " + std::to_string( relu.coord ) + " outside width " + std::to_string( width ) );
    }
    for ( auto& v : seq )
    {
        scalar& x = v[relu.coord - 1];
        if ( certified_sign_of( x, bits, max_bits ) < 0 )
        {
            x = scalar{};
        }
    }
    return seq;
}

run_result run( const encoder_model& model, std::string_view word, const run_options& options )
{
    run_result result;
    result.bits = options.bits.value_or( model.precision().bits( word.size() ) );
    const mpfr_prec_t max_bits = result.bits * options.max_bits_factor;

    sequence seq = embed( model, word );
    if ( options.keep_sequences )
    {
        result.sequences.push_back( seq );
    }
    result.layers.reserve( model.layers().size() );
    for ( const auto& l : model.layers() )
    {
        layer_trace trace;
        seq = apply_layer( l, std::move( seq ), result.bits, max_bits, &trace );
        result.layers.push_back( std::move( trace ) );
        if ( options.keep_sequences )
        {
            result.sequences.push_back( seq );
        }
    }
    const auto& t = model.acceptance();
    for ( std::size_t k = 0; k < t.size(); ++k )
    {
        if ( !t[k].is_zero() && !seq[0][k].is_zero() )
        {
            result.score += seq[0][k] * t[k];
        }
    }
    result.output = std::move( seq );
    return result;
}

decision decide( const run_result& result, mpfr_prec_t max_bits )
{
    if ( result.score.is_zero() )
    {
        throw model_error( "<t, v_0> = 0: the model's decision is undefined on this word" );
    }
    return certified_sign_of( result.score, result.bits, max_bits ) > 0 ? decision::accept : decision::reject;
}

decision accept( const encoder_model& model, std::string_view word )
{
    const run_options options;
    const auto result = run( model, word, options );
    return decide( result, result.bits * options.max_bits_factor );
}

robustness_report robustness_check( const encoder_model& model, std::string_view word, const run_options& options )
{
    robustness_report report;
    report.base = run( model, word, options );
    report.bits = report.base.bits;
    report.doubled_bits = 2 * report.bits;
    for ( const auto& t : report.base.layers )
    {
        report.min_gaps.push_back( t.stats.min_gap );
    }
    if ( model.precision().mode == numeric_mode::exact )
    {
        return report;
    }

    const double threshold = std::ldexp( 1.0, -static_cast<int>( report.bits ) );
    for ( std::size_t k = 0; k < report.min_gaps.size(); ++k )
    {
        if ( report.base.layers[k].attention && report.min_gaps[k] < threshold )
        {
            report.fragile_layers.push_back( k );
        }
    }

    run_options doubled = options;
    doubled.bits = report.doubled_bits;
    doubled.keep_sequences = false;
    const run_result again = run( model, word, doubled );
    for ( std::size_t k = 0; k < again.layers.size(); ++k )
    {
        if ( again.layers[k].selections != report.base.layers[k].selections )
        {
            report.changed_layers.push_back( k );
        }
    }
    const mpfr_prec_t max_bits = report.doubled_bits * options.max_bits_factor;
    report.decision_changed = decide( report.base, max_bits ) != decide( again, max_bits );
    report.unchanged = report.changed_layers.empty() && !report.decision_changed;
    return report;
}

} // namespace hac
