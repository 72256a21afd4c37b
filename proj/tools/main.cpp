#include "dsigma/engine.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int usage() {
    std::cerr <<
        "usage: dsigma <command> [options] <model-file>\n"
        "\n"
        "commands:\n"
        "  check poisson            twisted Poisson condition for the model's bivector\n"
        "  check dirac              Dirac-structure verification (isotropy + closure)\n"
        "  check gjac               orthogonal-operator integrability condition\n"
        "  symmetries               basis of the rigid symmetry algebra\n"
        "  extend                   solve the equivariant extension problem\n"
        "  gauge                    derive and emit the gauged action functional\n"
        "  standard-extend          standard equivariant-extension checker\n"
        "  oracle                   numeric point-sampling cross-check\n"
        "\n"
        "options:\n"
        "  --degree N                    polynomial degree bound (default: model file, else 2)\n"
        "  --algebra g|gtilde            symmetry algebra for extend/gauge (default g)\n"
        "  --assert-orbit-nondegenerate  record the theorem's orbit hypothesis as asserted\n"
        "  --emit latex|json             gauge output format (default json)\n"
        "  --samples K                   oracle sample count (default 20)\n"
        "  --seed S                      oracle RNG seed (default 1)\n"
        "\n"
        "exit codes: 0 pass, 1 fail/none, 2 input error, 3 inconclusive\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace dsigma;
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) return usage();

    RunOptions opt;
    opt.command = args[0];
    size_t i = 1;
    if (opt.command == "check") {
        if (args.size() < 2) return usage();
        opt.sub = args[1];
        i = 2;
    }
    std::string file;
    for (; i < args.size(); ++i) {
        const std::string& a = args[i];
        auto value = [&]() -> std::string {
            if (i + 1 >= args.size()) {
                std::cerr << "missing value for " << a << "\n";
                exit(2);
            }
            return args[++i];
        };
        if (a == "--degree") opt.degree = std::stoi(value());
        else if (a == "--algebra") opt.algebra = value();
        else if (a == "--assert-orbit-nondegenerate") opt.assert_orbit = true;
        else if (a == "--emit") opt.emit = value();
        else if (a == "--samples") opt.samples = std::stoi(value());
        else if (a == "--seed") opt.seed = std::stoull(value());
        else if (!a.empty() && a[0] == '-') { std::cerr << "unknown option " << a << "\n"; return usage(); }
        else file = a;
    }
    if (file.empty()) return usage();
    if (opt.algebra != "g" && opt.algebra != "gtilde") {
        std::cerr << "--algebra must be g or gtilde\n";
        return 2;
    }
    if (opt.emit != "latex" && opt.emit != "json") {
        std::cerr << "--emit must be latex or json\n";
        return 2;
    }

    std::ifstream in(file);
    if (!in) {
        std::cerr << "cannot open " << file << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    const auto t0 = std::chrono::steady_clock::now();
    try {
        ModelSpec model = parse_model(buf.str());
        RunResult res = run_command(model, opt);
        if (!res.latex.empty())
            std::cout << res.latex;
        else
            std::cout << res.report.dump(2) << "\n";
        const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - t0);
        std::cerr << "[dsigma] " << opt.command
                  << (opt.sub.empty() ? "" : " " + opt.sub) << " finished in " << dt.count()
                  << " ms\n";
        return res.exit_code;
    } catch (const ParseError& e) {
        Json err;
        err["schema"] = 1;
        err["command"] = opt.command;
        err["status"] = "error";
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        Json err;
        err["schema"] = 1;
        err["command"] = opt.command;
        err["status"] = "error";
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
