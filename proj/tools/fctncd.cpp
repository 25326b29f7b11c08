#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fctncd/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Nonconservative convection-diffusion solver with optimized flux limiters"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "Run one simulation from a config file");
    run->add_option("config", run_config, "Config file")->required();

    fctncd::BenchArgs bench_args;
    std::string schemes;
    std::string sigmas;
    std::string out;
    auto* bench = app.add_subcommand("bench", "Error table of a benchmark suite as CSV");
    bench->add_option("suite", bench_args.suite, "advection or rotation")->required();
    bench->add_option("--schemes", schemes, "Comma-separated schemes (default DIV,NDVL,NDVA)");
    bench->add_option("--sigmas", sigmas, "Comma-separated time weights (default 0,0.5,1)");
    bench->add_option("--out", out, "CSV output file (default stdout)");
    bench->add_flag("--oracle", bench_args.oracle, "Cross-check every LP with the dense simplex");
    bench->add_option("--cells", bench_args.cells, "Rotation grid cells per side")
        ->check(CLI::Range(3, 4096));
    bench->add_option("--steps", bench_args.steps, "Rotation steps per revolution")
        ->check(CLI::PositiveNumber);

    std::string converge_config;
    auto* converge = app.add_subcommand("converge", "Refinement study on a manufactured solution");
    converge->add_option("config", converge_config, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fctncd::kExitConfig;
    }

    if (*run) {
        return fctncd::cmd_run(run_config, std::cout, std::cerr);
    }
    if (*converge) {
        return fctncd::cmd_converge(converge_config, std::cout, std::cerr);
    }
    auto split = [](const std::string& text) {
        std::vector<std::string> items;
        std::string item;
        for (char c : text + ",") {
            if (c == ',') {
                if (!item.empty()) {
                    items.push_back(item);
                }
                item.clear();
            } else if (c != ' ') {
                item += c;
            }
        }
        return items;
    };
    if (!schemes.empty()) {
        bench_args.schemes = split(schemes);
    }
    if (!sigmas.empty()) {
        bench_args.sigmas.clear();
        for (const std::string& s : split(sigmas)) {
            try {
                bench_args.sigmas.push_back(std::stod(s));
            } catch (const std::exception&) {
                std::cerr << "config error: bad sigma '" << s << "'\n";
                return fctncd::kExitConfig;
            }
        }
    }
    if (!out.empty()) {
        bench_args.out = out;
    }
    return fctncd::cmd_bench(bench_args, std::cout, std::cerr);
}
