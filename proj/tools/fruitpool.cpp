// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/experiment.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"fruitpool: single-pool FruitChain simulator"};
    app.require_subcommand(1);

    std::string spec;
    std::optional<std::string> seeds;
    std::optional<std::string> out_dir;
    std::optional<double> delta;
    std::optional<std::string> log_base;
    auto* run = app.add_subcommand("run", "run every (strategy, seed) pair of an experiment spec");
    run->add_option("--spec,spec", spec, "experiment spec (YAML)")->required();
    run->add_option("--seeds", seeds, "seed list, e.g. 1,2,3 or 1..25");
    run->add_option("--out-dir", out_dir, "output directory");
    run->add_option("--delta", delta, "delta for the upper bound");
    run->add_option("--log-base", log_base, "2 or e");

    std::string params;
    auto* bounds = app.add_subcommand("bounds", "print the bound report for a parameter file");
    bounds->add_option("--spec,--params,params", params, "parameter file or experiment spec")->required();
    bounds->add_option("--delta", delta, "delta for the upper bound");
    bounds->add_option("--log-base", log_base, "2 or e");

    std::string transcript;
    bool rerun = false;
    auto* replay = app.add_subcommand("replay", "re-validate a stored transcript");
    replay->add_option("--transcript,transcript", transcript, "binary transcript")->required();
    replay->add_flag("--rerun", rerun, "also re-execute the embedded config and compare hashes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*run) return fruitpool::cmd_run(spec, seeds, out_dir, delta, log_base);
    if (*bounds) return fruitpool::cmd_bounds(params, delta, log_base);
    return fruitpool::cmd_replay(transcript, rerun);
}
