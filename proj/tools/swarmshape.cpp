// swarmshape <kind> --config <file> [--seed N] [--out DIR]
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "swarmshape/errors.hpp"
#include "swarmshape/scenario.hpp"

namespace {

constexpr int kExitUsage = 64;     // bad command line or unparsable config
constexpr int kExitData = 65;      // config rejected by validation
constexpr int kExitInternal = 70;  // a module failed while computing

}  // namespace

int main(int argc, char** argv) {
    using namespace swarmshape;
    CLI::App app{"Swarm shaping experiments: settling statistics, wall-friction planners and disc simulations."};
    std::string kind, config_path, out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> kinds(std::begin(kScenarioKinds), std::end(kScenarioKinds));
    app.add_option("kind", kind, "Scenario kind")->required()->check(CLI::IsMember(kinds));
    app.add_option("--config,-c", config_path, "key=value configuration file ('-' for stdin)")->required();
    app.add_option("--seed,-s", seed, "Seed for every random choice");
    app.add_option("--out,-o", out_dir, "Output directory (default: $SWARMSHAPE_OUT/<kind> or ./swarmshape-out/<kind>)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    std::string text;
    if (config_path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read config '" << config_path << "'\n";
            return kExitUsage;
        }
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    if (out_dir.empty()) {
        const char* env = std::getenv("SWARMSHAPE_OUT");
        out_dir = (std::filesystem::path(env && *env ? env : "swarmshape-out") / kind).string();
    }

    Scenario sc{kind, {}, seed};
    try {
        sc.params = parse_config(text);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        const ScenarioOutput out = run_scenario(sc);
        write_outputs(out_dir, sc, out);
        std::cout << out.summary;
        std::cout << "wrote " << out.files.size() << " file(s) and manifest.json to " << out_dir << '\n';
    } catch (const ValidationError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}
