#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fracdyn/cli.hpp"
#include "fracdyn/expr.hpp"
#include "fracdyn/volterra.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracdyn: fractional dynamics solver and certificate toolkit"};
    app.require_subcommand(1);

    const char* commands[] = {"certify", "solve", "sweep", "mnc", "kamke", "selftest"};
    const char* blurbs[] = {
        "compute the existence certificate and write certificate.json",
        "run the certified semi-discrete solve, write trajectory.csv and solve_report.json",
        "truncation and step-size study, write sweep.csv",
        "measure-of-non-compactness axiom battery and kernel checks, write mnc_report.json",
        "stability scan of the comparison family, write kamke_report.json",
        "run the full acceptance battery and print one line per criterion",
    };

    std::string config_path;
    std::string out_dir = ".";
    std::string chosen;
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(commands[i], blurbs[i]);
        auto* cfg = sub->add_option("--config", config_path, "path to the JSON config");
        if (std::string(commands[i]) != "selftest") cfg->required();
        sub->add_option("--out", out_dir, "output directory (default: current directory)");
        sub->callback([&chosen, name = std::string(commands[i])] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        fracdyn::cli::RunConfig config;
        if (!config_path.empty()) config = fracdyn::cli::parse_config(read_file(config_path));
        return fracdyn::cli::run(chosen, config, out_dir);
    } catch (const fracdyn::volterra::NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
