#include <CLI11.hpp>

#include "paraflow/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"paraflow: spectral experiments for 2D Euler and paradifferential operators"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    long seed = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed");
    };

    std::vector<std::string> names = {"solve",      "identities", "parametrix",
                                      "cusp-spectrum", "tail-sweep", "probe",
                                      "koch",       "shankar"};
    for (const auto& name : names) add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);

    std::string chosen = app.get_subcommands().front()->get_name();
    try {
        bool ok = paraflow::experiments::run(chosen, config_path, out_dir,
                                             static_cast<std::uint64_t>(seed));
        return ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
