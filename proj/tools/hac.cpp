// hac: compile LTL formulas to hard-attention encoders, run them, and check
// them against the logic semantics.
//
// Exit codes: 0 success / accept / equivalent, 1 reject / not equivalent,
// 2 usage or input error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hac/check.hpp"
#include "hac/compiler.hpp"
#include "hac/error.hpp"
#include "hac/model_io.hpp"
#include "hac/parikh.hpp"
#include "hac/parser.hpp"
#include "hac/runtime.hpp"
#include "hac/semantics.hpp"

namespace
{

using nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;

struct precision_flags
{
    std::optional<std::int64_t> a;
    std::optional<std::int64_t> b;
    std::optional<std::string> mode;

    void attach( CLI::App* cmd )
    {
        cmd->add_option( "--precision-a", a, "Slope a of the precision law bits(n) = a n + b" );
        cmd->add_option( "--precision-b", b, "Offset b of the precision law" );
        cmd->add_option( "--mode", mode, "Arithmetic: exact or bigfloat" )->check( CLI::IsMember( { "exact", "bigfloat" } ) );
    }

    [[nodiscard]] hac::compile_options compile_options() const
    {
        hac::compile_options o;
        o.precision_a = a;
        o.precision_b = b;
        if ( mode )
        {
            o.mode = hac::parse_mode( *mode );
        }
        return o;
    }

    [[nodiscard]] hac::encoder_model apply( const hac::encoder_model& m ) const
    {
        if ( !a && !b && !mode )
        {
            return m;
        }
        auto p = m.precision();
        p.a = a.value_or( p.a );
        p.b = b.value_or( p.b );
        if ( mode )
        {
            p.mode = hac::parse_mode( *mode );
        }
        return m.with_precision( p );
    }
};

std::string read_text( const std::string& path )
{
    std::ifstream in( path );
    if ( !in )
    {
        throw hac::format_error( "cannot read " + path );
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Inline JSON when the argument looks like a document, a file path otherwise.
ordered_json read_document( const std::string& arg )
{
    const auto start = arg.find_first_not_of( " \t\r\n" );
    const std::string text = start != std::string::npos && ( arg[start] == '{' || arg[start] == '[' ) ? arg : read_text( arg );
    try
    {
        return ordered_json::parse( text );
    }
    catch ( const nlohmann::json::parse_error& e )
    {
        throw hac::format_error( std::string{ "invalid JSON document: " } + e.what() );
    }
}

hac::table_registry read_tables( const std::string& arg )
{
    hac::table_registry tables;
    if ( arg.empty() )
    {
        return tables;
    }
    const auto doc = read_document( arg );
    if ( !doc.is_object() )
    {
        throw hac::format_error( "tables document must map names to row arrays" );
    }
    for ( const auto& item : doc.items() )
    {
        hac::bit_table t;
        t.name = item.key();
        try
        {
            t.rows = item.value().get<std::vector<std::string>>();
        }
        catch ( const nlohmann::json::exception& )
        {
            throw hac::format_error( "table '" + t.name + "' must be an array of bit strings" );
        }
        tables.add( std::move( t ) );
    }
    return tables;
}

std::string bits_of( const std::vector<bool>& v )
{
    std::string out;
    for ( std::size_t i = 0; i < v.size(); ++i )
    {
        out += ( i ? "," : "" );
        out += v[i] ? '1' : '0';
    }
    return out;
}

std::string default_letters( std::size_t d )
{
    const std::string pool = "abcdefghijklmnopqrstuvwyz";
    if ( d == 0 || d > pool.size() )
    {
        throw hac::domain_error( "unsupported dimension " + std::to_string( d ) );
    }
    return pool.substr( 0, d );
}

void print_summary( std::ostream& out, const hac::compiled_model& cm )
{
    std::size_t attention = 0, relu = 0;
    for ( const auto& l : cm.model.layers() )
    {
        ( std::holds_alternative<hac::attention_layer>( l ) ? attention : relu ) += 1;
    }
    out << "fragment: " << ( cm.kind == hac::fragment::mon ? "LTL(Mon) -> unique hard attention" : "LTL(C,+) -> average hard attention" )
        << "\n";
    out << "layers: " << cm.model.layers().size() << " (" << attention << " attention, " << relu << " relu)\n";
    out << "width: " << cm.model.input_width() << " -> " << cm.model.output_width() << "\n";
    out << "positional:";
    for ( const auto& p : cm.model.positional() )
    {
        out << " " << p.str();
    }
    out << "\nprecision: bits(n) = max(" << cm.model.precision().a << "n + " << cm.model.precision().b << ", "
        << hac::precision_policy::floor_bits() << "), " << hac::to_string( cm.model.precision().mode ) << "\n";
    out << "ledger:\n";
    for ( const auto& e : cm.ledger )
    {
        out << "  coord " << e.coord + 1 << " after layer " << e.ready_after << ": " << e.subformula << "\n";
    }
}

int cmd_compile( const std::string& alpha, const std::string& text, const std::string& out_path,
                 const std::string& tables_arg, const precision_flags& precision )
{
    const hac::alphabet sigma( alpha );
    const auto phi = hac::parse_formula( text, sigma, read_tables( tables_arg ) );
    const auto cm = hac::compile( phi, sigma, precision.compile_options() );
    if ( out_path.empty() || out_path == "-" )
    {
        std::cout << hac::model_to_string( cm.model );
        print_summary( std::cerr, cm );
    }
    else
    {
        hac::save_model( cm.model, out_path );
        print_summary( std::cout, cm );
    }
    return exit_ok;
}

int cmd_run( const std::string& model_path, const std::string& word, bool show_trace, const precision_flags& precision )
{
    const auto model = precision.apply( hac::load_model( model_path ) );
    hac::run_options options;
    options.keep_sequences = show_trace;
    const auto result = hac::run( model, word, options );
    const auto d = hac::decide( result, result.bits * options.max_bits_factor );
    if ( show_trace )
    {
        std::cout << "word: " << word << " (n = " << word.size() << ", " << result.bits << " bits)\n";
        auto ledger = hac::ledger_of( model );
        std::stable_sort( ledger.begin(), ledger.end(), []( const auto& x, const auto& y ) { return x.ready_after < y.ready_after; } );
        for ( const auto& e : ledger )
        {
            const auto& seq = result.sequences.at( e.ready_after );
            std::cout << "after layer " << e.ready_after << ", coord " << e.coord + 1 << ": ";
            for ( std::size_t i = 0; i < seq.size(); ++i )
            {
                std::cout << ( i ? "," : "" ) << seq[i][e.coord].str();
            }
            std::cout << "  " << e.subformula << "\n";
        }
        for ( std::size_t k = 0; k < result.layers.size(); ++k )
        {
            const auto& t = result.layers[k];
            if ( !t.attention || std::isinf( t.stats.min_gap ) )
            {
                continue;
            }
            std::cout << "layer " << k + 1 << " min gap " << t.stats.min_gap << ", selections:";
            for ( const auto& s : t.selections )
            {
                std::cout << " {";
                for ( std::size_t j = 0; j < s.size(); ++j )
                {
                    std::cout << ( j ? "," : "" ) << s[j];
                }
                std::cout << "}";
            }
            std::cout << "\n";
        }
        std::cout << "score: " << result.score.str() << "\n";
    }
    std::cout << ( d == hac::decision::accept ? "accept" : "reject" ) << "\n";
    return d == hac::decision::accept ? exit_ok : exit_negative;
}

int cmd_check( const std::string& alpha, const std::string& text, const std::string& model_path,
               const std::string& out_path, std::optional<std::size_t> max_len, unsigned workers, bool robustness,
               const std::string& tables_arg, const precision_flags& precision )
{
    const hac::alphabet sigma( alpha );
    hac::table_registry tables = read_tables( tables_arg );
    std::optional<hac::encoder_model> model;
    if ( !model_path.empty() )
    {
        model = precision.apply( hac::load_model( model_path ) );
        if ( !( model->alphabet() == sigma ) )
        {
            throw hac::domain_error( "model alphabet \"" + model->alphabet().symbols() + "\" differs from -a \"" + alpha + "\"" );
        }
        for ( const auto& p : model->positional() )
        {
            if ( p.predicate && p.predicate->kind() == hac::predicate_kind::table )
            {
                tables.add( *p.predicate->table_data() );
            }
        }
    }
    const auto phi = hac::parse_formula( text, sigma, tables );
    std::vector<hac::ledger_entry> ledger;
    if ( !model )
    {
        auto cm = hac::compile( phi, sigma, precision.compile_options() );
        ledger = cm.ledger;
        model.emplace( std::move( cm.model ) );
    }
    else
    {
        ledger = hac::ledger_of( *model );
    }

    hac::check_options options;
    options.max_len = max_len.value_or( sigma.size() <= 2 ? 8 : 6 );
    options.workers = workers;
    options.robustness = robustness;
    const auto report = hac::check_model( phi, *model, ledger, options );
    const std::string jsonl = report.to_jsonl();
    if ( out_path.empty() || out_path == "-" )
    {
        std::cout << jsonl;
    }
    else
    {
        std::ofstream out( out_path );
        if ( !out )
        {
            throw hac::format_error( "cannot write " + out_path );
        }
        out << jsonl;
        std::cout << ( report.equivalent() ? "equivalent" : "not equivalent" ) << ": " << report.words_tested
                  << " words, " << report.mismatches.size() << " mismatching\n";
    }
    return report.equivalent() ? exit_ok : exit_negative;
}

int cmd_oracle( const std::string& alpha, const std::string& text, const std::string& word, const std::string& tables_arg )
{
    const hac::alphabet sigma( alpha );
    const auto phi = hac::parse_formula( text, sigma, read_tables( tables_arg ) );
    const auto t = hac::trace( phi, sigma, word );
    std::cout << ( t[0] ? "accept" : "reject" ) << "\ntrace: " << bits_of( t ) << "\n";
    return t[0] ? exit_ok : exit_negative;
}

hac::alphabet set_alphabet( const std::string& alpha, std::size_t d )
{
    hac::alphabet sigma( alpha.empty() ? default_letters( d ) : alpha );
    if ( sigma.size() != d )
    {
        throw hac::domain_error( "alphabet has " + std::to_string( sigma.size() ) + " letters, set has dimension " +
                                 std::to_string( d ) );
    }
    return sigma;
}

std::string vector_str( const hac::count_vector& v )
{
    std::string out = "(";
    for ( std::size_t k = 0; k < v.size(); ++k )
    {
        out += ( k ? "," : "" ) + std::to_string( v[k] );
    }
    return out + ")";
}

int cmd_witness( const std::string& set_arg, const std::string& alpha )
{
    const auto s = hac::linear_set_from_json( read_document( set_arg ) );
    const auto sigma = set_alphabet( alpha, s.dimension() );
    const hac::witness_language w( s, sigma );
    if ( alpha.empty() )
    {
        std::cout << w.pattern() << "\n";
    }
    else
    {
        std::vector<std::string> names;
        for ( char c : sigma.symbols() )
        {
            names.emplace_back( 1, c );
        }
        std::cout << w.pattern( names ) << "\n";
    }
    return exit_ok;
}

int cmd_image( const std::string& set_arg, const std::string& alpha, std::size_t max_total )
{
    const auto s = hac::linear_set_from_json( read_document( set_arg ) );
    const auto sigma = set_alphabet( alpha, s.dimension() );
    const hac::witness_language w( s, sigma );
    for ( const auto& v : hac::parikh_image( [&]( std::string_view x ) { return w.contains( x ); }, sigma, max_total ) )
    {
        std::cout << vector_str( v ) << "\n";
    }
    return exit_ok;
}

int cmd_check_equiv( const std::string& set_arg, const std::string& alpha, std::size_t box )
{
    const auto s = hac::linear_set_from_json( read_document( set_arg ) );
    const auto sigma = set_alphabet( alpha, s.dimension() );
    const hac::witness_language w( s, sigma );
    const auto image = hac::parikh_image( [&]( std::string_view x ) { return w.contains( x ); }, sigma, box );
    const auto expected = hac::bounded_members( hac::semilinear_set{ { s } }, box );
    const bool pass = image == expected;
    std::cout << ( pass ? "pass" : "fail" ) << ": witness " << w.pattern() << ", " << image.size()
              << " vectors in the box of total " << box << "\n";
    if ( !pass )
    {
        for ( const auto& v : expected )
        {
            if ( !image.count( v ) )
            {
                std::cout << "  missing " << vector_str( v ) << "\n";
            }
        }
        for ( const auto& v : image )
        {
            if ( !expected.count( v ) )
            {
                std::cout << "  extra " << vector_str( v ) << "\n";
            }
        }
    }
    return pass ? exit_ok : exit_negative;
}

int cmd_perm_formula( const std::string& constraint_arg, const std::string& alpha )
{
    const hac::alphabet sigma( alpha );
    const auto c = hac::constraint_from_json( read_document( constraint_arg ) );
    std::cout << hac::constraint_to_formula( c, sigma ).str() << "\n";
    return exit_ok;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Compile LTL(Mon) / LTL(C,+) formulas into hard-attention transformer encoders" };
    app.require_subcommand( 1 );

    std::string alpha, text, model_path, out_path, word, tables_arg, set_arg, constraint_arg;
    std::optional<std::size_t> max_len;
    std::size_t max_total = 10;
    unsigned workers = 1;
    bool show_trace = false;
    bool no_robustness = false;
    precision_flags precision;

    auto* compile = app.add_subcommand( "compile", "Compile a formula into a model document" );
    compile->add_option( "-a,--alphabet", alpha, "Alphabet symbols, e.g. ab" )->required();
    compile->add_option( "-f,--formula", text, "Formula text" )->required();
    compile->add_option( "-o,--out", out_path, "Model file (stdout when omitted)" );
    compile->add_option( "--tables", tables_arg, "Predicate tables: JSON {name: [row, ...]} or a file" );
    precision.attach( compile );

    auto* run = app.add_subcommand( "run", "Run a model on a word" );
    run->add_option( "-m,--model", model_path, "Model file" )->required();
    run->add_option( "word", word, "Input word" )->required();
    run->add_flag( "--trace", show_trace, "Print every ledger column after its gadget" );
    precision.attach( run );

    auto* check = app.add_subcommand( "check", "Compare a compiled model with the oracle on all short words" );
    check->add_option( "-a,--alphabet", alpha, "Alphabet symbols" )->required();
    check->add_option( "-f,--formula", text, "Formula text" )->required();
    check->add_option( "-m,--model", model_path, "Check this model instead of compiling the formula" );
    check->add_option( "-o,--out", out_path, "JSONL report (stdout when omitted)" );
    check->add_option( "--max-len", max_len, "Longest word (default 8 for two letters, 6 otherwise)" )
        ->check( CLI::PositiveNumber );
    check->add_option( "--workers", workers, "Worker threads" )->check( CLI::Range( 1u, 256u ) );
    check->add_flag( "--no-robustness", no_robustness, "Skip the doubled-precision re-runs" );
    check->add_option( "--tables", tables_arg, "Predicate tables" );
    precision.attach( check );

    auto* oracle = app.add_subcommand( "oracle", "Evaluate a formula directly" );
    oracle->add_option( "-a,--alphabet", alpha, "Alphabet symbols" )->required();
    oracle->add_option( "-f,--formula", text, "Formula text" )->required();
    oracle->add_option( "word", word, "Input word" )->required();
    oracle->add_option( "--tables", tables_arg, "Predicate tables" );

    auto* parikh = app.add_subcommand( "parikh", "Parikh-image toolkit" );
    parikh->require_subcommand( 1 );
    auto* witness = parikh->add_subcommand( "witness", "Print the witness language of a linear set" );
    witness->add_option( "set", set_arg, "Linear set: JSON {\"base\": [...], \"periods\": [[...]]} or a file" )->required();
    witness->add_option( "-a,--alphabet", alpha, "Letters (default a1..ad)" );
    auto* image = parikh->add_subcommand( "image", "Parikh image of the witness language" );
    image->add_option( "set", set_arg, "Linear set document" )->required();
    image->add_option( "-a,--alphabet", alpha, "Letters" );
    image->add_option( "--max-total", max_total, "Longest enumerated word" );
    auto* equiv = parikh->add_subcommand( "check-equiv", "Check P(witness(S)) = S within a box" );
    equiv->add_option( "set", set_arg, "Linear set document" )->required();
    equiv->add_option( "-a,--alphabet", alpha, "Letters" );
    equiv->add_option( "--box,--max-total", max_total, "Bound on the vector total" );
    auto* perm = parikh->add_subcommand( "perm-formula", "LTL(C,+) formula of a counting constraint" );
    perm->add_option( "constraint", constraint_arg, "Constraint document or file" )->required();
    perm->add_option( "-a,--alphabet", alpha, "Alphabet symbols" )->required();

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        const int code = app.exit( e );
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if ( *compile )
        {
            return cmd_compile( alpha, text, out_path, tables_arg, precision );
        }
        if ( *run )
        {
            return cmd_run( model_path, word, show_trace, precision );
        }
        if ( *check )
        {
            return cmd_check( alpha, text, model_path, out_path, max_len, workers, !no_robustness, tables_arg, precision );
        }
        if ( *oracle )
        {
            return cmd_oracle( alpha, text, word, tables_arg );
        }
        if ( *witness )
        {
            return cmd_witness( set_arg, alpha );
        }
        if ( *image )
        {
            return cmd_image( set_arg, alpha, max_total );
        }
        if ( *equiv )
        {
            return cmd_check_equiv( set_arg, alpha, max_total );
        }
        if ( *perm )
        {
            return cmd_perm_formula( constraint_arg, alpha );
        }
    }
    catch ( const hac::error& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch ( const std::exception& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
