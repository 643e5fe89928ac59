// Drives the command-line tool as a subprocess and checks output schemas,
// exit codes, golden files and byte determinism.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

using nlohmann::json;

std::string g_cli;
std::string g_golden_dir;
int g_failures = 0;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string golden(const std::string& name) { return g_golden_dir + "/" + name; }

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_tests <cli-path> <golden-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_golden_dir = argv[2];
    const std::string disk = golden("disk.json");
    const std::string ellipse = golden("ellipse.json");
    const std::string p4 = golden("p4ball.json");

    {
        auto r = run_cli("dist --domain " + disk + " --metric funk --from 0,0 --to 0.5,0");
        expect(r.exit_code == 0, "dist exits 0");
        const auto j = json::parse(r.out);
        expect(std::abs(j["d_xy"].get<double>() - 0.693147) < 1e-6, "dist d_xy = log 2");
        expect(std::abs(j["d_yx"].get<double>() - 0.405465) < 1e-6, "dist d_yx = log 1.5");
        expect(j["symmetrization_residual"].get<double>() <= 1e-12, "dist symmetrization");
    }
    {
        auto r = run_cli("dist --domain " + disk + " --metric hilbert --from 0,0 --to 0,0");
        expect(r.exit_code == 0 && json::parse(r.out)["d_xy"].get<double>() == 0.0,
               "dist of a point to itself is 0");
    }
    {
        auto r = run_cli("dist --domain " + disk + " --metric funk --from 2,0 --to 0,0");
        expect(r.exit_code == 3, "exterior point exits 3");
    }
    {
        auto r = run_cli("wricci --domain " + disk + " --metric funk --point 0.2,0.1 "
                         "--vector 1,0 --N 4");
        expect(r.exit_code == 0, "wricci exits 0");
        const auto j = json::parse(r.out);
        expect(std::abs(j["ric_N"][0]["value"].get<double>() + 1.375) < 2e-3,
               "wricci funk N=4 value");
        expect(j["ric_n"] == "-inf", "wricci funk ric_n serialized as -inf");
    }
    {
        auto r = run_cli("wricci --domain " + disk + " --metric hilbert --point 0,0 "
                         "--vector 0,1 --N inf");
        const auto j = json::parse(r.out);
        expect(std::abs(j["ric_inf"].get<double>() - 2.0) < 2e-3, "wricci hilbert center");
    }
    {
        auto r = run_cli("wricci --domain " + disk + " --metric funk --point 0,0 "
                         "--vector 1,0 --N 1");
        expect(r.exit_code == 2, "N below dimension exits 2");
    }
    {
        auto r = run_cli("verify --domain " + ellipse + " --metric funk --samples 10 --seed 7");
        expect(r.exit_code == 0, "verify funk ellipse passes");
        auto again = run_cli("verify --domain " + ellipse + " --metric funk --samples 10 --seed 7");
        expect(r.out == again.out, "verify output is byte-identical for a fixed seed");
    }
    {
        auto r = run_cli("verify --domain " + p4 + " --metric funk --samples 5 --seed 7");
        expect(r.exit_code == 0, "verify p4 ball passes");
        const auto j = json::parse(r.out);
        expect(!j["warnings"].empty(), "p4 ball records a degenerate-margin warning");
        expect(j["convexity_margin"].get<double>() < 1e-2, "p4 margin is near zero");
    }
    {
        auto r = run_cli("ballvol --domain " + disk + " --metric funk --center 0,0 --r 1 "
                         "--samples 50000 --seed 3");
        const auto j = json::parse(r.out);
        const double exact = M_PI * std::pow(1.0 - std::exp(-1.0), 2);
        expect(std::abs(j["volume"].get<double>() - exact) <
                   3.0 * j["std_error"].get<double>() + 1e-12,
               "ballvol matches the closed form");
    }
    {
        auto r = run_cli("bgcheck --domain " + disk + " --metric hilbert --point 0,0 --N 4 "
                         "--samples 20000 --seed 3 --r-grid 0.5,1,1.5");
        const auto j = json::parse(r.out);
        expect(r.exit_code == 0 && j["violation_count"].get<int>() == 0,
               "bgcheck reports 0 violations");
        expect(std::abs(j["K"].get<double>() + 5.5) < 1e-12, "bgcheck derives the Hilbert K");
    }
    {
        auto r = run_cli("tensor --domain " + disk + " --metric hilbert --point 0,0 "
                         "--vector 1,0 --route graph");
        const auto j = json::parse(r.out);
        expect(std::abs(j["g"][0][0].get<double>() - 1.0) < 1e-10, "tensor identity at center");
        expect(std::abs(j["g_vv"].get<double>() - j["F_squared"].get<double>()) < 1e-7,
               "tensor g_vv equals F^2");
    }
    {
        auto r = run_cli("ricci --domain " + disk + " --metric funk --point 0.1,0.2 "
                         "--vector 1,0");
        const auto j = json::parse(r.out);
        expect(j["estimated_error"].get<double>() < 1e-4, "ricci error estimate small");
        expect(j["ric"].get<double>() < 0.0, "ricci is negative");
    }
    {
        // CSV and JSON encode the same values.
        auto jr = run_cli("domain-info --domain " + ellipse + " --samples 64 --seed 3");
        auto cr = run_cli("domain-info --domain " + ellipse + " --samples 64 --seed 3 "
                          "--format csv");
        const auto j = json::parse(jr.out);
        double csv_margin = -1.0;
        std::stringstream ss(cr.out);
        std::string line;
        while (std::getline(ss, line))
            if (line.rfind("convexity_margin,", 0) == 0)
                csv_margin = std::stod(line.substr(line.find(',') + 1));
        expect(j["convexity_margin"].get<double>() == csv_margin,
               "CSV and JSON encode identical values");
        expect(std::abs(j["convexity_margin"].get<double>() - 0.25) < 1e-2,
               "ellipse margin is b/a^2");
    }
    {
        // Golden files freeze the output schemas byte for byte.
        auto r = run_cli("dist --domain " + disk + " --metric funk --from 0,0 --to 0.5,0");
        expect(r.out == read_file(golden("dist_disk_funk.json")), "golden: dist output");
        auto r2 = run_cli("domain-info --domain " + disk + " --samples 64 --seed 3");
        expect(r2.out == read_file(golden("domain_info_disk.json")), "golden: domain-info output");
    }
    {
        auto r = run_cli("verify --domain " + disk + " --metric hilbert --samples 8 --seed 7");
        expect(r.exit_code == 0, "verify hilbert passes");
        const auto j = json::parse(r.out);
        bool has_bounds = false;
        for (const auto& c : j["checks"])
            if (c["name"] == "bound_membership_excess") has_bounds = true;
        expect(has_bounds, "hilbert verify reports bound membership");
    }
    {
        auto r = run_cli("dist --domain " + disk +
                         " --metric funk --from 0,0 --to 0.5,0 --output /tmp/fhgeo_out.json");
        expect(r.exit_code == 0 && r.out.empty(), "--output writes to file, not stdout");
        expect(read_file("/tmp/fhgeo_out.json") == read_file(golden("dist_disk_funk.json")),
               "--output file matches the golden bytes");
    }
    {
        auto r = run_cli("dist --domain " + golden("missing.json") +
                         " --metric funk --from 0,0 --to 0.5,0");
        expect(r.exit_code == 2, "missing domain file exits 2");
        auto r2 = run_cli("nonsense-subcommand");
        expect(r2.exit_code == 2, "unknown subcommand exits 2");
    }

    if (g_failures == 0) {
        std::cout << "cli_tests: all passed\n";
        return 0;
    }
    std::cerr << "cli_tests: " << g_failures << " failure(s)\n";
    return 1;
}
