// spdc: command-line front end for the angle-resolved type-II SPDC simulator.
//
//   spdc run <scenario|preset> [--out DIR] [--format csv|json] [--seed N]
//   spdc bell-angles <scenario|preset> --state psi+|psi- [--out DIR] [--format csv|json]
//   spdc materials list [--file PATH]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical convergence error.

#include <CLI11.hpp>

#include <iostream>

#include "spdc/spdc.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

spdc::OutputFormat parse_format(const std::string& f) {
    return f == "json" ? spdc::OutputFormat::Json : spdc::OutputFormat::Csv;
}

void print_table(const spdc::Table& t, spdc::OutputFormat format) {
    if (format == spdc::OutputFormat::Csv)
        std::cout << spdc::to_csv(t);
    else
        std::cout << spdc::to_json(t).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Angle-resolved polarization entanglement in collinear type-II SPDC"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::string out_dir = ".";
    std::string bell_out_dir;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::string state = "psi-";
    std::string materials_file;

    auto* run = app.add_subcommand("run", "Run a scenario file or bundled preset and write its tables");
    run->add_option("scenario", scenario_arg, "Scenario file or preset name (fig2a, fig2b, fig2c, fig3)")
        ->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--seed", seed, "Override the scenario seed");

    auto* bell = app.add_subcommand("bell-angles", "List angles at which a Bell state is emitted");
    bell->add_option("scenario", scenario_arg, "Scenario file or preset name")->required();
    bell->add_option("--state", state, "Bell state")->check(CLI::IsMember({"psi+", "psi-"}));
    bell->add_option("--out", bell_out_dir, "Write the table to this directory instead of stdout");
    bell->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* materials = app.add_subcommand("materials", "Material database");
    auto* list = materials->add_subcommand("list", "List known materials");
    list->add_option("--file", materials_file, "Additional material file");
    materials->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto spec = spdc::load_scenario_file(spdc::resolve_scenario_path(scenario_arg));
            if (seed) spec.seed = *seed;
            const auto result = spdc::run_scenario(spec);
            for (const auto& t : result.tables) {
                const auto path = spdc::write_table(t, out_dir, spec.name, parse_format(format));
                std::cout << path.string() << '\n';
            }
        } else if (*bell) {
            const auto spec = spdc::load_scenario_file(spdc::resolve_scenario_path(scenario_arg));
            const auto which = state == "psi+" ? spdc::BellState::PsiPlus : spdc::BellState::PsiMinus;
            const auto result = spdc::list_bell_angles(spec, which);
            if (!result.notice.empty()) std::cerr << result.notice << '\n';
            if (bell_out_dir.empty())
                print_table(result.table, parse_format(format));
            else
                std::cout << spdc::write_table(result.table, bell_out_dir, spec.name, parse_format(format)).string()
                          << '\n';
        } else if (*list) {
            auto lib = spdc::MaterialLibrary::builtin();
            if (!materials_file.empty()) lib.merge_file(materials_file);
            for (const auto& name : lib.names()) {
                const auto& m = lib.get(name);
                std::cout << name << "  band " << m.band_min / spdc::units::nm << "-"
                          << m.band_max / spdc::units::nm << " nm\n";
            }
        }
    } catch (const spdc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const spdc::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
