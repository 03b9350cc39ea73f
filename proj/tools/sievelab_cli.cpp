// Command-line front door: parse a sieve/family document, dispatch to the
// right backend, emit a verdict with its certificate.
//
// Exit codes: 0 Canonical, 1 NotCanonical/NotColimSieve, 2 ColimOnlyUnknown,
// 64 input error. Subcommands colim/pullback/descent use 0 for a positive
// answer (colim sieve / success / all descent checks pass) and 1 otherwise.

#include "sievelab/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using sievelab::runner::Options;
using sievelab::runner::Report;
using json = sievelab::doc::json;

json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sievelab::invalid_input("cannot open document: " + path);
    return json::parse(in);
}

void emit(const Report& report, const std::string& format) {
    if (format == "json") {
        std::cout << report.body.dump(2) << "\n";
    } else {
        // keep stdout byte-deterministic; timing goes to stderr
        std::cout << sievelab::runner::render_text(report.body);
        if (report.body.contains("timing_ms"))
            std::cerr << "time: " << report.body["timing_ms"] << " ms\n";
    }
}

struct CommonArgs {
    std::string file;
    std::string format = "json";
    int budget = 3;
    std::string question = "universal";
    std::string test_objects;
};

Options make_options(const CommonArgs& args) {
    Options opt;
    opt.budget = args.budget;
    if (args.question != "universal" && args.question != "colim")
        throw sievelab::invalid_input("--question must be 'universal' or 'colim'");
    opt.universal = args.question == "universal";
    if (const char* seed = std::getenv("SIEVELAB_SEED")) opt.seed = std::string(seed);
    if (!args.test_objects.empty()) opt.test_objects = json::parse(args.test_objects);
    return opt;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_question) {
    cmd->add_option("file", args.file, "input document (JSON)")->required();
    cmd->add_option("--format", args.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--budget", args.budget, "probe entry bound (default 3)");
    if (with_question)
        cmd->add_option("--question", args.question, "universal or colim")
            ->check(CLI::IsMember({"universal", "colim"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact certified verdicts for canonical-topology covers"};
    app.require_subcommand(1);

    CommonArgs check_args, colim_args, pullback_args, descent_args;
    std::string corpus_dir, corpus_format = "text";

    CLI::App* check = app.add_subcommand("check", "decide a cover with a certificate");
    add_common(check, check_args, true);

    CLI::App* colim = app.add_subcommand("colim", "compute colimit diagnostics");
    add_common(colim, colim_args, false);

    CLI::App* pullback = app.add_subcommand("pullback", "pull a cover back along a map");
    add_common(pullback, pullback_args, false);

    CLI::App* descent = app.add_subcommand("descent", "sheaf condition against test objects");
    add_common(descent, descent_args, false);
    descent->add_option("--test-objects", descent_args.test_objects,
                        "JSON array of test objects ('target'/'colim', group documents, "
                        "or label arrays)");

    CLI::App* corpus = app.add_subcommand("corpus", "run a fixture directory");
    corpus->add_option("dir", corpus_dir, "directory of fixture documents")->required();
    corpus->add_option("--format", corpus_format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            Report r = sievelab::runner::run_check(load_document(check_args.file),
                                                   make_options(check_args));
            emit(r, check_args.format);
            return r.exit_code;
        }
        if (colim->parsed()) {
            Report r = sievelab::runner::run_colim(load_document(colim_args.file),
                                                   make_options(colim_args));
            emit(r, colim_args.format);
            return r.exit_code;
        }
        if (pullback->parsed()) {
            Report r = sievelab::runner::run_pullback(load_document(pullback_args.file),
                                                      make_options(pullback_args));
            emit(r, pullback_args.format);
            return r.exit_code;
        }
        if (descent->parsed()) {
            Report r = sievelab::runner::run_descent(load_document(descent_args.file),
                                                     make_options(descent_args));
            emit(r, descent_args.format);
            return r.exit_code;
        }
        if (corpus->parsed()) {
            auto result = sievelab::runner::run_corpus(corpus_dir);
            if (corpus_format == "json") {
                json out = json::array();
                for (const auto& f : result.fixtures)
                    out.push_back(json{{"name", f.name}, {"pass", f.pass}, {"detail", f.detail}});
                std::cout << out.dump(2) << "\n";
            } else {
                int passed = 0;
                for (const auto& f : result.fixtures) {
                    std::cout << (f.pass ? "PASS " : "FAIL ") << f.name;
                    if (!f.detail.empty()) std::cout << " (" << f.detail << ")";
                    std::cout << "\n";
                    if (f.pass) ++passed;
                }
                std::cout << passed << "/" << result.fixtures.size() << " fixtures pass\n";
            }
            return result.exit_code;
        }
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return sievelab::runner::exit_input_error;
    } catch (const sievelab::invalid_input& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return sievelab::runner::exit_input_error;
    } catch (const sievelab::scale_exceeded& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return sievelab::runner::exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sievelab::runner::exit_input_error;
    }
    return sievelab::runner::exit_input_error;
}
