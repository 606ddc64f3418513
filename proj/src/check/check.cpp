#include "hac/check.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "hac/error.hpp"
#include "hac/parser.hpp"
#include "hac/semantics.hpp"

namespace hac
{

using nlohmann::ordered_json;

namespace
{

struct word_result
{
    std::optional<word_mismatch> mismatch;
    double min_gap = std::numeric_limits<double>::infinity();
    int escalations = 0;
    mpfr_prec_t bits = 0;
    bool changed = false;
    bool fragile = false;
    bool margin_violation = false;
};

struct checked_column
{
    std::string text;
    formula f;
    std::size_t coord;
};

table_registry tables_of( const encoder_model& model )
{
    table_registry tables;
    for ( const auto& p : model.positional() )
    {
        if ( p.predicate && p.predicate->kind() == predicate_kind::table && !tables.find( p.predicate->table_data()->name ) )
        {
            tables.add( *p.predicate->table_data() );
        }
    }
    return tables;
}

word_result check_word( const formula& phi, const encoder_model& model, const std::vector<checked_column>& columns,
                        const check_options& options, const std::string& word )
{
    word_result out;
    word_mismatch m;
    m.word = word;
    m.oracle = accepts( phi, model.alphabet(), word );
    try
    {
        run_options ro;
        robustness_report rep;
        if ( options.robustness )
        {
            rep = robustness_check( model, word, ro );
            out.changed = !rep.unchanged;
            out.fragile = !rep.fragile_layers.empty();
        }
        else
        {
            rep.base = run( model, word, ro );
        }
        const run_result& r = rep.base;
        out.bits = r.bits;
        for ( const auto& t : r.layers )
        {
            out.min_gap = std::min( out.min_gap, t.stats.min_gap );
            out.escalations += t.stats.escalations;
        }
        const decision d = decide( r, r.bits * ro.max_bits_factor );
        m.model = d == decision::accept;
        out.margin_violation = !( r.score == scalar{ 1 } || r.score == scalar{ -1 } );

        for ( const auto& c : columns )
        {
            const auto expected = trace( c.f, model.alphabet(), word );
            for ( std::size_t i = 0; i < word.size(); ++i )
            {
                const scalar& got = r.output[i][c.coord];
                if ( !( got == scalar{ expected[i] ? 1 : 0 } ) )
                {
                    m.positions.push_back( position_mismatch{ c.text, i, expected[i], got.str() } );
                }
            }
        }
    }
    catch ( const error& e )
    {
        m.model.reset();
        m.error = e.what();
    }
    if ( !m.model || *m.model != m.oracle || !m.positions.empty() )
    {
        out.mismatch = std::move( m );
    }
    return out;
}

} // namespace

std::string nth_word( const alphabet& sigma, std::size_t len, std::uint64_t index )
{
    std::string w( len, sigma.symbols()[0] );
    for ( std::size_t k = len; k-- > 0; )
    {
        w[k] = sigma.symbols()[index % sigma.size()];
        index /= sigma.size();
    }
    return w;
}

std::uint64_t word_count( const alphabet& sigma, std::size_t min_len, std::size_t max_len )
{
    std::uint64_t total = 0;
    std::uint64_t layer = 1;
    for ( std::size_t len = 1; len <= max_len; ++len )
    {
        layer *= sigma.size();
        if ( len >= min_len )
        {
            total += layer;
        }
    }
    return total;
}

check_report check_model( const formula& phi, const encoder_model& model, const std::vector<ledger_entry>& ledger,
                          const check_options& options )
{
    if ( options.min_len < 1 || options.max_len < options.min_len )
    {
        throw domain_error( "length range must satisfy 1 <= min <= max" );
    }
    const alphabet& sigma = model.alphabet();
    std::vector<checked_column> columns;
    if ( options.positionwise )
    {
        const table_registry tables = tables_of( model );
        for ( const auto& e : ledger )
        {
            columns.push_back( checked_column{ e.subformula, parse_formula( e.subformula, sigma, tables ), e.coord } );
        }
    }

    // words in length-lexicographic order
    std::vector<std::pair<std::size_t, std::uint64_t>> ranges;
    std::uint64_t per_len = 1;
    for ( std::size_t len = 1; len <= options.max_len; ++len )
    {
        per_len *= sigma.size();
        if ( len >= options.min_len )
        {
            ranges.emplace_back( len, per_len );
        }
    }
    const std::uint64_t total = word_count( sigma, options.min_len, options.max_len );
    auto word_at = [&]( std::uint64_t k ) {
        for ( const auto& [len, count] : ranges )
        {
            if ( k < count )
            {
                return nth_word( sigma, len, k );
            }
            k -= count;
        }
        throw domain_error( "word index out of range" );
    };

    std::vector<word_result> results( total );
    const unsigned workers = std::max( 1u, options.workers );
    std::atomic<std::uint64_t> next{ 0 };
    constexpr std::uint64_t chunk = 64;
    auto work = [&] {
        while ( true )
        {
            const std::uint64_t begin = next.fetch_add( chunk );
            if ( begin >= total )
            {
                return;
            }
            const std::uint64_t end = std::min( total, begin + chunk );
            for ( std::uint64_t k = begin; k < end; ++k )
            {
                results[k] = check_word( phi, model, columns, options, word_at( k ) );
            }
        }
    };
    if ( workers == 1 )
    {
        work();
    }
    else
    {
        std::vector<std::thread> pool;
        for ( unsigned w = 0; w < workers; ++w )
        {
            pool.emplace_back( work );
        }
        for ( auto& t : pool )
        {
            t.join();
        }
    }

    check_report report;
    report.formula = phi.str();
    report.alphabet = sigma.symbols();
    report.min_len = options.min_len;
    report.max_len = options.max_len;
    report.words_tested = total;
    report.precision = model.precision();
    for ( auto& r : results )
    {
        report.min_gap = std::min( report.min_gap, r.min_gap );
        report.escalations += r.escalations;
        report.max_bits_used = std::max( report.max_bits_used, r.bits );
        report.robustness_changes += r.changed;
        report.fragile_words += r.fragile;
        report.margin_violations += r.margin_violation;
        if ( r.mismatch )
        {
            report.mismatches.push_back( std::move( *r.mismatch ) );
        }
    }
    return report;
}

std::string check_report::to_jsonl() const
{
    std::string out;
    for ( const auto& m : mismatches )
    {
        ordered_json rec{ { "type", "mismatch" }, { "word", m.word }, { "oracle", m.oracle ? 1 : 0 } };
        rec["model"] = m.model ? ordered_json( *m.model ? 1 : 0 ) : ordered_json( nullptr );
        if ( !m.error.empty() )
        {
            rec["error"] = m.error;
        }
        ordered_json positions = ordered_json::array();
        for ( const auto& p : m.positions )
        {
            positions.push_back( ordered_json{
                { "subformula", p.subformula }, { "position", p.position }, { "oracle", p.oracle ? 1 : 0 }, { "model", p.model } } );
        }
        rec["positions"] = std::move( positions );
        out += rec.dump() + "\n";
    }
    ordered_json summary{ { "type", "summary" },
                          { "formula", formula },
                          { "alphabet", alphabet },
                          { "min_len", min_len },
                          { "max_len", max_len },
                          { "words_tested", words_tested },
                          { "mismatched_words", mismatches.size() },
                          { "verdict", equivalent() ? "equivalent" : "not-equivalent" } };
    summary["min_attention_gap"] = std::isinf( min_gap ) ? ordered_json( nullptr ) : ordered_json( min_gap );
    summary["precision"] = ordered_json{ { "a", precision.a },
                                         { "b", precision.b },
                                         { "mode", to_string( precision.mode ) },
                                         { "max_bits", max_bits_used } };
    summary["escalations"] = escalations;
    summary["robustness_changes"] = robustness_changes;
    summary["fragile_words"] = fragile_words;
    summary["margin_violations"] = margin_violations;
    out += summary.dump() + "\n";
    return out;
}

} // namespace hac
