#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewlab/config.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/report.hpp"
#include "skewlab/stage_io.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string stages_path;
    std::string out_dir = ".";
    std::int64_t seed = -1;  // -1: take the config's seed
    int max_stage = -1;      // -1: whole schedule
};

std::uint64_t effective_seed(const skewlab::ExperimentConfig& cfg,
                             const CommonArgs& a) {
    return a.seed >= 0 ? static_cast<std::uint64_t>(a.seed) : cfg.seed;
}

// stages come from --stages when given, otherwise from a fresh build
std::vector<skewlab::Stage> obtain_stages(const skewlab::ExperimentConfig& cfg,
                                          const CommonArgs& a) {
    if (!a.stages_path.empty()) return skewlab::load_stages(a.stages_path);
    return skewlab::build_schedule(cfg, effective_seed(cfg, a), a.max_stage);
}

void add_common(CLI::App* cmd, CommonArgs& a, bool with_stages) {
    cmd->add_option("--config", a.config_path, "experiment config (json)")
        ->required();
    if (with_stages)
        cmd->add_option("--stages", a.stages_path,
                        "stage file from a previous build (rebuilds when "
                        "absent)");
    cmd->add_option("--out", a.out_dir, "output directory")->required();
    cmd->add_option("--seed", a.seed, "override the config seed");
    cmd->add_option("--max-stage", a.max_stage,
                    "stop the schedule after this stage");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"laboratory for stage-built periodic orbits in circle skew "
                 "products"};
    app.require_subcommand(1);

    CommonArgs a;
    CLI::App* cmd_build =
        app.add_subcommand("build", "build the stage sequence");
    add_common(cmd_build, a, false);
    CLI::App* cmd_validate =
        app.add_subcommand("validate", "re-check every stage invariant");
    add_common(cmd_validate, a, true);
    CLI::App* cmd_fk = app.add_subcommand(
        "fk", "match profiles and the Cauchy gap bounds");
    add_common(cmd_fk, a, true);
    CLI::App* cmd_measure = app.add_subcommand(
        "measure", "orbit measures, strip mass, spanning counts");
    add_common(cmd_measure, a, true);
    CLI::App* cmd_all =
        app.add_subcommand("report-all", "everything, plus plots and summary");
    add_common(cmd_all, a, true);

    CLI11_PARSE(app, argc, argv);

    try {
        skewlab::ExperimentConfig cfg =
            skewlab::load_config_file(a.config_path);
        if (cmd_build->parsed()) {
            skewlab::run_build(cfg, a.out_dir, effective_seed(cfg, a),
                               a.max_stage);
        } else if (cmd_validate->parsed()) {
            skewlab::run_validate(cfg, obtain_stages(cfg, a), a.out_dir);
        } else if (cmd_fk->parsed()) {
            skewlab::run_fk(cfg, obtain_stages(cfg, a), a.out_dir);
        } else if (cmd_measure->parsed()) {
            skewlab::run_measure(cfg, obtain_stages(cfg, a), a.out_dir);
        } else if (cmd_all->parsed()) {
            skewlab::run_report_all(cfg, obtain_stages(cfg, a), a.out_dir);
        }
    } catch (const skewlab::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return ex.exit_code();
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
