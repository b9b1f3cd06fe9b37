// bnfstab: batch driver for the normal-form stability pipeline.
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bnf/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Rigorous Birkhoff normal form and effective stability estimates"};
    std::string config_path, resume_path, out_path;
    bool verify = false;
    app.add_option("--config", config_path, "run specification (key = value lines)");
    app.add_option("--resume", resume_path, "checkpoint to continue from");
    app.add_option("--out", out_path, "report path (overrides 'output' in the config)");
    app.add_flag("--verify-appendix-b", verify, "recompute the worked example and compare with the published values");
    CLI11_PARSE(app, argc, argv);

    try {
        if (verify) return bnf::verify_appendix_b(std::cout) ? bnf::kExitOk : bnf::kExitOther;
        if (config_path.empty()) {
            std::cerr << "bnfstab: --config is required\n";
            return bnf::kExitParse;
        }
        bnf::RunConfig cfg = bnf::parse_config_file(config_path);
        if (!out_path.empty()) cfg.output_path = out_path;
        const std::optional<std::string> resume =
            resume_path.empty() ? std::nullopt : std::optional<std::string>(resume_path);
        const bnf::RunOutcome out = bnf::run(cfg, resume);
        if (cfg.output_path.empty()) std::cout << bnf::table_report(cfg, out);
        for (const std::string& m : out.messages) std::cerr << "bnfstab: " << m << '\n';
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "bnfstab: " << e.what() << '\n';
        return bnf::exit_code_for(e);
    }
}
