#ifndef HULLCERT_CLI_HPP
#define HULLCERT_CLI_HPP

#include "error.hpp"
#include "evaluation.hpp"
#include "hull.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "report.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hullcert::cli {

enum ExitCode : int { Success = 0, UsageError = 1, DataError = 2 };

namespace detail {

inline std::string_view as_text(const io::Bytes& bytes) {
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

/// Reads a matrix (FVEC, or CSV by extension) and records its digest.
inline Matrix load_matrix(const std::string& path, bool csv_header, Report& report, const std::string& role) {
    const auto bytes = io::read_file(path);
    add_input_digest(report, role, bytes);
    if (io::guess_format(path) == io::MatrixFormat::Csv) {
        return io::parse_csv_matrix(as_text(bytes), csv_header, path);
    }
    return io::decode_fvec(bytes, path);
}

inline LabelVector load_labels(const std::string& path, Report& report, const std::string& role) {
    const auto bytes = io::read_file(path);
    add_input_digest(report, role, bytes);
    return io::decode_lvec(bytes, path);
}

inline io::NamedScores load_scores(const std::string& path, Report& report, const std::string& role) {
    const auto bytes = io::read_file(path);
    add_input_digest(report, role, bytes);
    return io::parse_scores(as_text(bytes), path);
}

inline HullApprox load_hull(const std::string& path, Report& report) {
    const auto bytes = io::read_file(path);
    add_input_digest(report, "hull", bytes);
    return io::decode_hull(bytes, path);
}

inline void emit(const Report& report, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << format_report(report);
    } else {
        write_report(report, out_path);
    }
}

inline std::string first_nonfinite(const ScoreVector& scores) {
    std::string list;
    std::size_t shown = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            if (shown < 10) {
                list += (shown ? ", " : "") + std::to_string(i);
                ++shown;
            }
            ++total;
        }
    }
    return total == 0 ? std::string() : std::to_string(total) + " sample(s), first: " + list;
}

} // namespace detail

/**
 * Entry point of the command-line tool. Writes reports to `out`, diagnostics
 * to `err`, and returns 0 on success, 1 on usage errors, 2 on data errors.
 */
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Convex-hull uncertainty toolkit: hull approximation, to-hull uncertainty, closure ratio, "
                 "comparison metrics and evaluation harnesses.",
                 "hullcert"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    bool csv_header = false;
    app.add_flag("--csv-header", csv_header, "CSV matrix inputs start with a header row");

    std::string train, out_path, hull_path, test, softmax, train_act, train_labels, test_act, test_pred;
    std::string a_path, b_path, clean, adv, metric, other, correct, scores_path;
    std::size_t subsample_limit = 0;
    std::uint64_t subsample_seed = 0;
    std::size_t train_n = 0;
    std::uint64_t seed = 0;
    double fraction = 0.0;

    auto* eps_cmd = app.add_subcommand("epsilon", "Margin epsilon: mean nearest-neighbour distance of the training set");
    eps_cmd->add_option("--train", train, "training matrix (FVEC or .csv)")->required();
    eps_cmd->add_option("--subsample-limit", subsample_limit, "average over a seeded subsample above this many rows");
    eps_cmd->add_option("--subsample-seed", subsample_seed, "seed for --subsample-limit");
    eps_cmd->add_option("--out", out_path, "report path (default: stdout)");

    auto* build_cmd = app.add_subcommand("build", "Build the hull approximation of a training set");
    build_cmd->add_option("--train", train, "training matrix (FVEC or .csv)")->required();
    build_cmd->add_option("--out", out_path, "output hull file (HUL1)")->required();
    build_cmd->add_option("--subsample-limit", subsample_limit, "epsilon subsample size (0 = exact)");
    build_cmd->add_option("--subsample-seed", subsample_seed, "seed for --subsample-limit");

    auto* tu_cmd = app.add_subcommand("tu", "To-hull uncertainty of each test sample");
    tu_cmd->add_option("--hull", hull_path, "hull file (HUL1)")->required();
    tu_cmd->add_option("--test", test, "test matrix (FVEC or .csv)")->required();
    tu_cmd->add_option("--out", out_path, "output score CSV")->required();

    auto* summary_cmd = app.add_subcommand("summary", "Closure ratio and mean exterior TU of a test set");
    summary_cmd->add_option("--hull", hull_path, "hull file (HUL1)")->required();
    summary_cmd->add_option("--test", test, "test matrix (FVEC or .csv)")->required();
    summary_cmd->add_option("--out", out_path, "report path (default: stdout)");

    auto* gini_cmd = app.add_subcommand("gini", "DeepGini score of each softmax row");
    gini_cmd->add_option("--softmax", softmax, "softmax matrix (FVEC or .csv)")->required();
    gini_cmd->add_option("--out", out_path, "output score CSV")->required();

    auto* dsa_cmd = app.add_subcommand("dsa", "Distance-based surprise adequacy");
    dsa_cmd->add_option("--train-act", train_act, "training activations")->required();
    dsa_cmd->add_option("--train-labels", train_labels, "training labels (LVEC)")->required();
    dsa_cmd->add_option("--test-act", test_act, "test activations")->required();
    dsa_cmd->add_option("--test-pred", test_pred, "predicted test labels (LVEC)")->required();
    dsa_cmd->add_option("--out", out_path, "output score CSV")->required();

    auto* combine_cmd = app.add_subcommand("combine", "Elementwise product of two score files");
    combine_cmd->add_option("--a", a_path, "first score CSV")->required();
    combine_cmd->add_option("--b", b_path, "second score CSV")->required();
    combine_cmd->add_option("--out", out_path, "output score CSV")->required();

    auto* detect_cmd = app.add_subcommand("detect", "Logistic clean-vs-adversarial detection on one metric");
    detect_cmd->add_option("--clean", clean, "scores of clean samples (CSV)")->required();
    detect_cmd->add_option("--adv", adv, "scores of adversarial samples (CSV)")->required();
    detect_cmd->add_option("--train-n", train_n, "fitting samples drawn from each set")->required();
    detect_cmd->add_option("--seed", seed, "64-bit sampling seed")->required();
    detect_cmd->add_option("--out", out_path, "report path (default: stdout)");

    auto* correlate_cmd = app.add_subcommand("correlate", "Pearson and point-biserial correlations");
    correlate_cmd->add_option("--metric", metric, "metric scores (CSV)")->required();
    correlate_cmd->add_option("--other", other, "scores to correlate with (CSV)")->required();
    correlate_cmd->add_option("--correct", correct, "0/1 correctness (LVEC)")->required();
    correlate_cmd->add_option("--out", out_path, "report path (default: stdout)");

    auto* select_cmd = app.add_subcommand("select", "Indices of the highest-scoring fraction of samples");
    select_cmd->add_option("--scores", scores_path, "scores (CSV)")->required();
    select_cmd->add_option("--fraction", fraction, "fraction in (0, 1]")
        ->required()
        ->check(CLI::Validator(
            [](std::string& text) -> std::string {
                double v = 0.0;
                return CLI::detail::lexical_cast(text, v) && v > 0.0 && v <= 1.0 ? std::string()
                                                                                  : "must be in (0, 1]";
            },
            "(0, 1]"));
    select_cmd->add_option("--out", out_path, "report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Success;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << "\n";
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return UsageError;
    }

    try {
        if (eps_cmd->parsed()) {
            Report report = make_report("epsilon");
            const auto m = detail::load_matrix(train, csv_header, report, "train");
            EpsilonOptions options{subsample_limit, subsample_seed};
            report["epsilon"] = compute_epsilon(m, options);
            report["rows"] = m.rows();
            report["cols"] = m.cols();
            const bool subsampled = subsample_limit > 0 && m.rows() > subsample_limit;
            report["subsample_limit"] = subsampled ? Report(subsample_limit) : Report(nullptr);
            if (subsampled) {
                report["seed"] = subsample_seed;
            }
            detail::emit(report, out_path, out);
        } else if (build_cmd->parsed()) {
            Report report = make_report("build");
            const auto m = detail::load_matrix(train, csv_header, report, "train");
            HullBuildOptions options;
            options.epsilon = {subsample_limit, subsample_seed};
            const auto hull = build_hull_approximation(m, options);
            io::write_hull(hull, out_path);
            report["epsilon"] = hull.epsilon;
            report["hull_size"] = hull.size();
            report["training_rows"] = m.rows();
            report["iterations"] = hull.build_stats.iterations;
            report["projections"] = hull.build_stats.projections;
            report["max_residual"] = hull.build_stats.max_residual;
            report["source_rows"] = hull.source_rows;
            if (subsample_limit > 0 && m.rows() > subsample_limit) {
                report["seed"] = subsample_seed;
            }
            out << format_report(report);
        } else if (tu_cmd->parsed()) {
            Report report = make_report("tu");
            const auto hull = detail::load_hull(hull_path, report);
            const auto m = detail::load_matrix(test, csv_header, report, "test");
            const auto tu = to_hull_uncertainty(m, hull);
            io::write_scores(out_path, {"tu", tu});
            report["samples"] = tu.size();
            report["summary"] = to_json(closure_ratio(tu));
            out << format_report(report);
        } else if (summary_cmd->parsed()) {
            Report report = make_report("summary");
            const auto hull = detail::load_hull(hull_path, report);
            const auto m = detail::load_matrix(test, csv_header, report, "test");
            const auto summary = closure_ratio(to_hull_uncertainty(m, hull));
            report.update(to_json(summary));
            report["epsilon"] = hull.epsilon;
            report["hull_size"] = hull.size();
            detail::emit(report, out_path, out);
        } else if (gini_cmd->parsed()) {
            Report report = make_report("gini");
            const auto m = detail::load_matrix(softmax, csv_header, report, "softmax");
            const auto gini = deep_gini(m);
            io::write_scores(out_path, {"deep_gini", gini});
            report["samples"] = gini.size();
            out << format_report(report);
        } else if (dsa_cmd->parsed()) {
            Report report = make_report("dsa");
            const auto ta = detail::load_matrix(train_act, csv_header, report, "train_act");
            const auto tl = detail::load_labels(train_labels, report, "train_labels");
            const auto xa = detail::load_matrix(test_act, csv_header, report, "test_act");
            const auto xp = detail::load_labels(test_pred, report, "test_pred");
            const auto scores = dsa(ta, tl, xa, xp);
            if (const auto bad = detail::first_nonfinite(scores); !bad.empty()) {
                throw Error(ErrorKind::DegenerateDenominator,
                            "nearest same-class activation is duplicated in another class for " + bad);
            }
            io::write_scores(out_path, {"dsa", scores});
            report["samples"] = scores.size();
            out << format_report(report);
        } else if (combine_cmd->parsed()) {
            Report report = make_report("combine");
            const auto a = detail::load_scores(a_path, report, "a");
            const auto b = detail::load_scores(b_path, report, "b");
            const auto combined = combined_metric(a.values, b.values);
            io::write_scores(out_path, {a.name + "*" + b.name, combined});
            report["samples"] = combined.size();
            out << format_report(report);
        } else if (detect_cmd->parsed()) {
            Report report = make_report("detect");
            const auto c = detail::load_scores(clean, report, "clean");
            const auto a = detail::load_scores(adv, report, "adv");
            const auto detection = detect_adversarial(c.values, a.values, train_n, seed, c.name);
            report.update(to_json(detection));
            report["seed"] = seed;
            detail::emit(report, out_path, out);
        } else if (correlate_cmd->parsed()) {
            Report report = make_report("correlate");
            const auto m = detail::load_scores(metric, report, "metric");
            const auto o = detail::load_scores(other, report, "other");
            const auto labels = detail::load_labels(correct, report, "correct");
            report.update(to_json(correlation_report(m.values, o.values, labels)));
            report["metric_name"] = m.name;
            report["other_name"] = o.name;
            detail::emit(report, out_path, out);
        } else if (select_cmd->parsed()) {
            Report report = make_report("select");
            const auto s = detail::load_scores(scores_path, report, "scores");
            const auto picked = prioritize_top_fraction(s.values, fraction);
            report["fraction"] = fraction;
            report["indices"] = picked;
            report["selected"] = picked.size();
            report["samples"] = s.values.size();
            detail::emit(report, out_path, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return DataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return DataError;
    }
    return Success;
}

} // namespace hullcert::cli

#endif
