#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cbd/dsl.hpp"
#include "cbd/errors.hpp"
#include "cbd/lambda.hpp"
#include "cbd/report.hpp"
#include "cbd/system.hpp"

namespace {

// Exit codes: 0 success, 2 invalid input, 3 contextual under
// --fail-on-contextual, 64 usage, 74 I/O.
constexpr int kExitInvalid = 2;
constexpr int kExitContextual = 3;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buffer.str();
}

struct IoFailure {
    std::string path;
};

std::string slurp(const std::string& path) {
    std::optional<std::string> text = read_file(path);
    if (!text) throw IoFailure{path};
    return *std::move(text);
}

int run_validate(const std::string& path) {
    cbd::parse(slurp(path));
    std::cout << "valid\n";
    return 0;
}

int run_analyze(const std::string& path, bool json, bool witness, bool fail_on_contextual) {
    cbd::System system = cbd::parse(slurp(path));
    cbd::Report report = cbd::analyze_system(system);
    if (json)
        std::cout << cbd::report_to_json(report) << "\n";
    else
        std::cout << cbd::report_to_text(report, witness);
    return report.analysis.contextual && fail_on_contextual ? kExitContextual : 0;
}

int run_cyclic(const std::string& path) {
    cbd::System system = cbd::parse(slurp(path));
    cbd::Report report;  // only the structural fields; no LP runs here
    report.system = system;
    report.consistency = cbd::is_consistently_connected(system);
    report.cyclic = cbd::detect_cyclic(system);
    if (report.cyclic) {
        report.s_odd_value = cbd::s_odd(report.cyclic->correlations);
        report.cyclic_verdict =
            cbd::cyclic_criterion(*report.cyclic, report.consistency.consistent);
    }
    std::cout << cbd::cyclic_to_text(report);
    return 0;
}

int run_lambda(const std::string& path, const std::string& context) {
    cbd::System system = cbd::parse(slurp(path));
    std::cout << cbd::lambda_to_text(cbd::reconstruct_lambda(system, context));
    return 0;
}

int run_ingest(const std::string& csv_path, const std::string& format_path,
               const std::string& out_path) {
    cbd::SystemFormat format = cbd::parse_format(slurp(format_path));
    std::vector<cbd::TrialRecord> records = cbd::parse_trials_csv(slurp(csv_path), format);
    std::string document = cbd::serialize(cbd::ingest_trials(format, records));
    if (out_path.empty()) {
        std::cout << document;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    out << document;
    out.flush();
    if (!out) throw IoFailure{out_path};
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contextuality analysis for content-context systems of +/-1 variables"};
    app.require_subcommand(1);

    std::string path;
    std::string context_label;
    std::string format_path;
    std::string out_path;
    bool json = false;
    bool witness = false;
    bool fail_on_contextual = false;

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "parse a system document and check its invariants");
    validate_cmd->add_option("file", path, "system document")->required();

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "decide contextuality and print the full report");
    analyze_cmd->add_option("file", path, "system document")->required();
    analyze_cmd->add_flag("--json", json, "emit the JSON report");
    analyze_cmd->add_flag("--witness", witness, "list witness coupling atoms in text output");
    analyze_cmd->add_flag("--fail-on-contextual", fail_on_contextual,
                          "exit with status 3 when the system is contextual");

    CLI::App* cyclic_cmd =
        app.add_subcommand("cyclic", "recognize cyclic structure and apply the closed form");
    cyclic_cmd->add_option("file", path, "system document")->required();

    CLI::App* lambda_cmd =
        app.add_subcommand("lambda", "hidden variable and response functions for one context");
    lambda_cmd->add_option("file", path, "system document")->required();
    lambda_cmd->add_option("--context", context_label, "context label")->required();

    CLI::App* ingest_cmd =
        app.add_subcommand("ingest", "build a system document from a trial table");
    ingest_cmd->add_option("csv", path, "trial table (context,<content>,... header)")
        ->required();
    ingest_cmd->add_option("--format", format_path, "document declaring contents and contexts")
        ->required();
    ingest_cmd->add_option("-o,--output", out_path, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate_cmd->parsed()) return run_validate(path);
        if (analyze_cmd->parsed()) return run_analyze(path, json, witness, fail_on_contextual);
        if (cyclic_cmd->parsed()) return run_cyclic(path);
        if (lambda_cmd->parsed()) return run_lambda(path, context_label);
        if (ingest_cmd->parsed()) return run_ingest(path, format_path, out_path);
    } catch (const IoFailure& failure) {
        std::cerr << "cannot read or write '" << failure.path << "'\n";
        return kExitIo;
    } catch (const cbd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitUsage;
}
