#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "synlens/annotate.hpp"
#include "synlens/error.hpp"
#include "synlens/fixtures.hpp"
#include "synlens/ingest.hpp"
#include "synlens/report.hpp"
#include "synlens/server.hpp"

namespace fs = std::filesystem;
using namespace synlens;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << bytes;
    if (!out.flush()) throw DataError("write to '" + path.string() + "' failed");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError("empty element in list '" + s + "'");
        out.push_back(item.substr(b, e - b + 1));
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

struct AnalyzeArgs {
    fs::path input;
    std::string format;
    std::string text_col = "text";
    std::string ks;
    double dup_threshold = report::kDefaultDupThreshold;
    std::string metrics;
    fs::path out;
    fs::path lexicon;
    std::string linkage = "average";
    std::size_t embed_dim = 256;
    bool no_fallback = false;
    bool include_matrices = false;
};

report::AnalysisOptions analysis_options(const AnalyzeArgs& a) {
    report::AnalysisOptions opt;
    if (!a.ks.empty()) {
        opt.ks.clear();
        for (const auto& item : split_list(a.ks)) {
            std::size_t k = 0;
            const auto* end = item.data() + item.size();
            const auto [ptr, ec] = std::from_chars(item.data(), end, k);
            if (ec != std::errc() || ptr != end || k == 0) {
                throw ConfigError("--k: '" + item + "' is not a positive integer");
            }
            opt.ks.push_back(k);
        }
    }
    if (!a.metrics.empty()) {
        opt.metrics.clear();
        for (const auto& item : split_list(a.metrics)) {
            auto view = metrics::parse_view(item);
            if (!view) throw ConfigError("--metrics: unknown metric '" + item + "' (TOKEN, POS, DEP, EMBEDDING)");
            opt.metrics.push_back(*view);
        }
    }
    if (!(a.dup_threshold >= 0.0 && a.dup_threshold <= 1.0)) {
        throw ConfigError("--dup-threshold must be in [0, 1]");
    }
    opt.dup_threshold = a.dup_threshold;
    opt.linkage = a.linkage == "complete" ? cluster::Linkage::Complete : cluster::Linkage::Average;
    opt.embedding.fallback_enabled = !a.no_fallback;
    opt.embedding.dim = a.embed_dim;
    opt.include_matrices = a.include_matrices;
    return opt;
}

void print_diagnostics(const std::vector<Diagnostic>& diags, std::string_view unit) {
    for (const auto& d : diags) std::cerr << format_diagnostic(d, unit) << "\n";
}

int run_analyze(const AnalyzeArgs& a) {
    const auto options = analysis_options(a);
    auto format = a.format;
    if (format.empty()) {
        const auto ext = a.input.extension().string();
        format = (ext == ".conllu" || ext == ".conll") ? "conllu" : "csv";
    }
    const auto bytes = read_file(a.input);

    std::vector<AnnotatedExample> examples;
    SourceKind source = SourceKind::Csv;
    if (format == "conllu") {
        auto parsed = ingest::parse_conllu(bytes);
        print_diagnostics(parsed.diagnostics, "sentence");
        examples = std::move(parsed.annotated);
        source = SourceKind::Conllu;
    } else {
        ingest::CsvColumns cols;
        cols.text = a.text_col;
        auto parsed = ingest::parse_csv(bytes, cols);
        print_diagnostics(parsed.diagnostics, "row");
        auto lexicon = annotate::Lexicon::builtin();
        if (!a.lexicon.empty()) lexicon.merge(annotate::Lexicon::parse(read_file(a.lexicon)));
        examples = annotate::annotate_corpus(parsed.corpus, lexicon);
    }

    for (const auto k : options.ks) {
        if (k > examples.size()) {
            std::cerr << "warning: k=" << k << " exceeds the " << examples.size()
                      << " examples and is skipped\n";
        }
    }

    const auto bundle = report::build_analysis(examples, source, options);
    std::cerr << examples.size() << " examples (" << to_string(source) << ")\n";
    for (const auto& av : bundle.availability) {
        std::cerr << "  " << metrics::to_string(av.metric) << ": "
                  << (av.available ? "available" : "unavailable (" + av.reason + ")") << "\n";
    }
    if (!bundle.comparison_note.empty()) std::cerr << "  " << bundle.comparison_note << "\n";
    write_file(a.out, report::serialize_bundle(bundle));
    std::cerr << "wrote " << a.out.string() << "\n";
    return kExitOk;
}

int run_report(const fs::path& path, std::optional<std::size_t> k) {
    const auto bundle = report::parse_bundle(read_file(path));
    std::cout << report::render_text_report(bundle, k);
    return kExitOk;
}

int run_compare(const fs::path& path) {
    const auto bundle = report::parse_bundle(read_file(path));
    std::cout << report::render_comparison(bundle);
    return kExitOk;
}

int run_fixtures(const fs::path& spec_path, const fs::path& out_dir) {
    const auto spec = fixtures::parse_spec(read_file(spec_path));
    const auto fixture = fixtures::generate_fixture(spec);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create '" + out_dir.string() + "': " + ec.message());
    const auto csv = out_dir / (fixture.name + ".csv");
    const auto conllu = out_dir / (fixture.name + ".conllu");
    write_file(csv, fixtures::to_csv(fixture.examples));
    write_file(conllu, ingest::serialize_conllu(fixture.examples));
    std::cerr << "wrote " << fixture.examples.size() << " examples to " << csv.string() << " and "
              << conllu.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synlens: syntax-aware clustering and pattern summaries for text corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "synlens 1.0.0");

    AnalyzeArgs az;
    auto* analyze = app.add_subcommand("analyze", "Analyze a corpus and write a JSON bundle");
    analyze->add_option("--input", az.input, "CSV or CoNLL-U file")->required()->check(CLI::ExistingFile);
    analyze->add_option("--format", az.format, "Input format (default: from the file extension)")
        ->check(CLI::IsMember({"csv", "conllu"}));
    analyze->add_option("--text-col", az.text_col, "CSV text column")->capture_default_str();
    analyze->add_option("--k", az.ks, "Comma-separated cluster counts (default 3,5,10,20,30,40,50)");
    analyze->add_option("--dup-threshold", az.dup_threshold, "Near-duplicate distance threshold")
        ->capture_default_str();
    analyze->add_option("--metrics", az.metrics, "Comma-separated subset of TOKEN,POS,DEP,EMBEDDING");
    analyze->add_option("--out", az.out, "Bundle output path")->required();
    analyze->add_option("--lexicon", az.lexicon, "Extra word<TAB>UPOS lexicon for CSV input")
        ->check(CLI::ExistingFile);
    analyze->add_option("--linkage", az.linkage, "average or complete")
        ->check(CLI::IsMember({"average", "complete"}))
        ->capture_default_str();
    analyze->add_option("--embed-dim", az.embed_dim, "Fallback embedding dimension")
        ->check(CLI::Range(std::size_t{8}, std::size_t{65536}))
        ->capture_default_str();
    analyze->add_flag("--no-fallback-embedding", az.no_fallback,
                      "Disable the hashed embedding when none are supplied");
    analyze->add_flag("--include-matrices", az.include_matrices, "Store distance matrices in the bundle");

    fs::path report_path;
    std::optional<std::size_t> report_k;
    auto* report_cmd = app.add_subcommand("report", "Print cluster summaries from a bundle");
    report_cmd->add_option("bundle", report_path)->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--k", report_k, "Cluster count to show (default 10 or the largest)");

    fs::path compare_path;
    auto* compare_cmd = app.add_subcommand("compare", "Print the metric comparison table");
    compare_cmd->add_option("bundle", compare_path)->required()->check(CLI::ExistingFile);

    fs::path serve_path;
    int port = 8080;
    std::string host = "127.0.0.1";
    std::optional<fs::path> static_dir;
    auto* serve_cmd = app.add_subcommand("serve", "Serve a bundle over HTTP");
    serve_cmd->add_option("bundle", serve_path)->required()->check(CLI::ExistingFile);
    serve_cmd->add_option("--port", port)->check(CLI::Range(0, 65535))->capture_default_str();
    serve_cmd->add_option("--host", host)->capture_default_str();
    serve_cmd->add_option("--static", static_dir, "Explorer UI asset directory")->check(CLI::ExistingDirectory);

    fs::path spec_path;
    fs::path out_dir;
    auto* fixtures_cmd = app.add_subcommand("fixtures", "Fixture corpora");
    fixtures_cmd->require_subcommand(1);
    auto* generate = fixtures_cmd->add_subcommand("generate", "Generate CSV and CoNLL-U from a spec");
    generate->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
    generate->add_option("--out", out_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze) return run_analyze(az);
        if (*report_cmd) return run_report(report_path, report_k);
        if (*compare_cmd) return run_compare(compare_path);
        if (*serve_cmd) return report::serve(serve_path, port, host, static_dir);
        if (*generate) return run_fixtures(spec_path, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
