// Command-line front end: mine, discretize, transform, oracle-check.
//
// Exit codes: 0 success, 1 oracle-check mismatch, 2 configuration error,
// 3 input/data error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rulemine/pipeline.hpp"

namespace {

using namespace rulemine;

void add_threshold_option(CLI::App* cmd, const std::string& flag, Fraction& target,
                          const std::string& help, bool required = false) {
    auto* opt = cmd->add_option_function<std::string>(
        flag, [&target](const std::string& v) { target = parse_fraction(v); }, help);
    if (required) opt->required();
}

void add_common_mining_options(CLI::App* cmd, RunConfig& config) {
    add_threshold_option(cmd, "--min-support,-s", config.min_support,
                         "Minimum support, decimal or percentage (e.g. 0.3 or 30%)", true);
    cmd->add_option_function<std::string>(
        "--max-support",
        [&config](const std::string& v) { config.max_support = parse_fraction(v); },
        "Maximum support for merged intervals (default 5x min support)");
    add_threshold_option(cmd, "--K", config.partial_completeness,
                         "Partial-completeness level K > 1 (default 1.5)");
    cmd->add_option("--partitions", config.partitions_override,
                    "Partition count override (default: from the K formula)");
    std::map<std::string, DiscretizeMode> modes{{"none", DiscretizeMode::None},
                                                {"equi-width", DiscretizeMode::EquiWidth},
                                                {"equi-depth", DiscretizeMode::EquiDepth}};
    cmd->add_option("--discretize", config.discretize, "Quantitative discretization mode")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    std::map<std::string, IntervalMode> imodes{{"merged", IntervalMode::Merged},
                                               {"all", IntervalMode::AllConsecutive}};
    cmd->add_option("--interval-mode", config.interval_mode,
                    "Interval admission: merged base partitions or all consecutive ranges")
        ->transform(CLI::CheckedTransformer(imodes, CLI::ignore_case));
    cmd->add_option("--partitioning", config.partitioning_path,
                    "Partitioning file to apply instead of computing one");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequent itemset and association rule mining"};
    app.require_subcommand(1);

    RunConfig config;

    auto* mine = app.add_subcommand("mine", "Mine association rules from a basket file");
    mine->add_option("input", config.input_path, "Basket file")->required();
    add_common_mining_options(mine, config);
    add_threshold_option(mine, "--min-confidence,-c", config.min_confidence,
                         "Minimum confidence, decimal or percentage", true);
    mine->add_option("--taxonomy", config.taxonomy_path, "Taxonomy edge-list file");
    std::map<std::string, InterestMode> interests{{"none", InterestMode::None},
                                                  {"lift", InterestMode::Lift},
                                                  {"chi2", InterestMode::Chi2}};
    mine->add_option("--interest", config.interest, "Interestingness screening mode")
        ->transform(CLI::CheckedTransformer(interests, CLI::ignore_case));
    mine->add_option("--chi2-threshold", config.chi2_threshold,
                     "Significance threshold for chi2 flags (default 3.84)");
    std::map<std::string, OutputFormat> formats{{"table", OutputFormat::Table},
                                                {"csv", OutputFormat::Csv},
                                                {"jsonl", OutputFormat::Jsonl}};
    mine->add_option("--format", config.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    mine->add_option("--buckets", config.bucket_count, "Hash-tree bucket count (default 8)");
    mine->add_option("--leaf-split", config.leaf_split_threshold,
                     "Hash-tree leaf split threshold (default 16)");
    mine->add_flag("--naive-count", config.naive_counting,
                   "Count candidates without the hash tree (differential baseline)");
    mine->add_option("--threads", config.threads,
                     "Worker threads for counting scans (0 = hardware)");

    auto* discretize =
        app.add_subcommand("discretize", "Emit the interval partitioning without mining");
    discretize->add_option("input", config.input_path, "Basket file")->required();
    add_common_mining_options(discretize, config);

    auto* transform =
        app.add_subcommand("transform", "Convert between quantities and taxonomies");
    transform->add_option("input", config.input_path, "Basket file")->required();
    add_common_mining_options(transform, config);
    transform->add_option("--taxonomy", config.taxonomy_path,
                          "Taxonomy edge-list file (required for to-quantitative)");
    transform->add_flag("--bisect", config.bisect_taxonomy,
                        "Recursively bisect partitions into deeper interval trees");
    std::map<std::string, TransformDirection> directions{
        {"to-taxonomy", TransformDirection::ToTaxonomy},
        {"to-quantitative", TransformDirection::ToQuantitative}};
    TransformDirection direction = TransformDirection::ToTaxonomy;
    transform->add_option("--direction", direction, "Transformation direction")
        ->transform(CLI::CheckedTransformer(directions, CLI::ignore_case))
        ->required();

    auto* oracle =
        app.add_subcommand("oracle-check", "Differential-test the miner on a given input");
    oracle->add_option("input", config.input_path, "Basket file")->required();
    add_common_mining_options(oracle, config);
    add_threshold_option(oracle, "--min-confidence,-c", config.min_confidence,
                         "Minimum confidence, decimal or percentage");
    oracle->add_option("--taxonomy", config.taxonomy_path, "Taxonomy edge-list file");
    oracle->add_option("--seed", config.seed, "Seed for the random subset trials");
    oracle->add_option("--trials", config.oracle_trials,
                       "Number of random subset trials (default 200)");
    oracle->add_option("--buckets", config.bucket_count, "Hash-tree bucket count");
    oracle->add_option("--leaf-split", config.leaf_split_threshold,
                       "Hash-tree leaf split threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const rulemine::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (mine->parsed()) {
            std::cout << mine_report(config);
        } else if (discretize->parsed()) {
            std::cout << discretize_report(config);
        } else if (transform->parsed()) {
            std::cout << transform_report(config, direction);
        } else if (oracle->parsed()) {
            auto result = oracle_check(config);
            std::cout << result.report;
            return result.ok ? 0 : 1;
        }
    } catch (const rulemine::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rulemine::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
