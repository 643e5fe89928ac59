// Command-line front end: parses domain specs, dispatches the library
// operations and emits deterministic JSON or CSV reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fhgeo/curvature.hpp"
#include "fhgeo/measure.hpp"
#include "fhgeo/sampling.hpp"
#include "fhgeo/tensor.hpp"
#include "fhgeo/wricci.hpp"

namespace {

using fhgeo::Vec;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitVerification = 4;

Vec parse_vector(const std::string& text) {
    std::vector<double> values;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            fhgeo::raise(fhgeo::ErrorCode::BadSpec, "cannot parse number \"" + token + "\"");
        }
    }
    if (values.empty()) fhgeo::raise(fhgeo::ErrorCode::BadSpec, "empty vector literal");
    Vec v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<int>(i)] = values[i];
    return v;
}

std::vector<double> parse_N_list(const std::string& text) {
    std::vector<double> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token == "inf")
            out.push_back(fhgeo::kInfiniteN);
        else {
            try {
                out.push_back(std::stod(token));
            } catch (const std::exception&) {
                fhgeo::raise(fhgeo::ErrorCode::BadN, "cannot parse N token \"" + token + "\"");
            }
        }
    }
    if (out.empty()) fhgeo::raise(fhgeo::ErrorCode::BadN, "empty N list");
    return out;
}

ordered_json vec_json(const Vec& v) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

ordered_json mat_json(const fhgeo::Mat& m) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

ordered_json N_json(double N) {
    if (N == fhgeo::kInfiniteN) return "inf";
    return N;
}

void flatten_json(const ordered_json& j, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
    const auto scalar = [](const ordered_json& v) -> std::string {
        if (v.is_number_float()) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
            return buf;
        }
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    };
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten_json(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out.emplace_back(prefix, scalar(j));
    }
}

struct OutputOptions {
    std::string format = "json";
    std::string path;  // empty = stdout
};

void emit(const ordered_json& report, const OutputOptions& opts) {
    std::string text;
    if (opts.format == "csv") {
        std::vector<std::pair<std::string, std::string>> rows;
        flatten_json(report, "", rows);
        text = "key,value\n";
        for (const auto& [k, v] : rows) text += k + "," + v + "\n";
    } else {
        text = report.dump(2) + "\n";
    }
    if (opts.path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.path, std::ios::binary);
        if (!out) fhgeo::raise(fhgeo::ErrorCode::BadSpec, "cannot open output file " + opts.path);
        out << text;
    }
}

struct CommonArgs {
    std::string domain_path;
    std::string metric = "funk";
    OutputOptions out;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_metric = true) {
    cmd->add_option("--domain", args.domain_path, "domain spec JSON file")->required();
    if (need_metric)
        cmd->add_option("--metric", args.metric, "funk|rfunk|hilbert")
            ->check(CLI::IsMember({"funk", "rfunk", "hilbert"}));
    cmd->add_option("--format", args.out.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", args.out.path, "output path (default stdout)");
}

ordered_json ric_n_json(const fhgeo::RicNEntry& e) {
    ordered_json j;
    j["N"] = N_json(e.N);
    if (e.finite)
        j["value"] = e.value;
    else
        j["value"] = "-inf";
    return j;
}

ordered_json wricci_json(const fhgeo::WeightedRicciReport& rep) {
    ordered_json j;
    j["metric"] = fhgeo::metric_kind_name(rep.kind);
    j["x"] = vec_json(rep.x);
    j["v_unit"] = vec_json(rep.v_unit);
    j["input_norm"] = rep.input_norm;
    j["t_plus"] = rep.t_plus;
    j["t_minus"] = rep.t_minus;
    j["ric"] = rep.ric;
    j["ric_error_estimate"] = rep.ric_error_estimate;
    j["psi1"] = rep.psi1;
    j["psi2"] = rep.psi2;
    j["ric_inf"] = rep.ric_inf;
    j["ric_n"] = ric_n_json(rep.ric_n)["value"];
    ordered_json entries = ordered_json::array();
    for (const auto& e : rep.ric_N) entries.push_back(ric_n_json(e));
    j["ric_N"] = entries;
    if (rep.oracle) {
        const auto& o = *rep.oracle;
        ordered_json oj;
        oj["psi1"] = o.psi1;
        oj["psi2"] = o.psi2;
        oj["ric"] = o.ric;
        oj["ric_inf"] = o.ric_inf;
        ordered_json oe = ordered_json::array();
        for (const auto& e : o.ric_N) oe.push_back(ric_n_json(e));
        oj["ric_N"] = oe;
        j["oracle"] = oj;
        ordered_json dev;
        for (const auto& [name, d] : rep.deviations) dev[name] = d;
        j["deviation"] = dev;
    }
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"Funk and Hilbert geometry toolkit"};
    app.require_subcommand(1);

    // dist
    CommonArgs dist_args;
    std::string from_text, to_text;
    auto* dist = app.add_subcommand("dist", "directed distances between two points");
    add_common(dist, dist_args);
    dist->add_option("--from", from_text)->required();
    dist->add_option("--to", to_text)->required();

    // domain-info
    CommonArgs info_args;
    int info_samples = 256;
    std::uint64_t info_seed = 1;
    auto* info = app.add_subcommand("domain-info", "dimension, box and convexity margin");
    add_common(info, info_args, false);
    info->add_option("--samples", info_samples);
    info->add_option("--seed", info_seed);

    // tensor
    CommonArgs tensor_args;
    std::string tensor_point, tensor_vector, tensor_route = "vertical";
    double fd_step = 0.0;
    auto* tensor = app.add_subcommand("tensor", "fundamental tensor g_v");
    add_common(tensor, tensor_args);
    tensor->add_option("--point", tensor_point)->required();
    tensor->add_option("--vector", tensor_vector)->required();
    tensor->add_option("--route", tensor_route)
        ->check(CLI::IsMember({"vertical", "horizontal", "graph"}));
    tensor->add_option("--fd-step", fd_step, "step fraction override");

    // ricci
    CommonArgs ricci_args;
    std::string ricci_point, ricci_vector;
    double ricci_fd_step = 0.0, ricci_tol = 1e-4;
    auto* ricci_cmd = app.add_subcommand("ricci", "Finsler Ricci curvature");
    add_common(ricci_cmd, ricci_args);
    ricci_cmd->add_option("--point", ricci_point)->required();
    ricci_cmd->add_option("--vector", ricci_vector)->required();
    ricci_cmd->add_option("--fd-step", ricci_fd_step);
    ricci_cmd->add_option("--tol", ricci_tol);

    // wricci
    CommonArgs wricci_args;
    std::string w_point, w_vector, w_N = "inf";
    double w_tol = 2e-3;
    bool w_strict = false;
    auto* wricci_cmd = app.add_subcommand("wricci", "weighted Ricci curvature report");
    add_common(wricci_cmd, wricci_args);
    wricci_cmd->add_option("--point", w_point)->required();
    wricci_cmd->add_option("--vector", w_vector)->required();
    wricci_cmd->add_option("--N", w_N, "comma list, token inf allowed");
    wricci_cmd->add_option("--tol", w_tol);
    wricci_cmd->add_flag("--strict", w_strict, "exit 4 when any deviation exceeds --tol");

    // verify
    CommonArgs verify_args;
    int verify_samples = 30;
    std::uint64_t verify_seed = 7;
    double verify_tol = 2e-3;
    auto* verify = app.add_subcommand("verify", "theorem verification sweep");
    add_common(verify, verify_args);
    verify->add_option("--samples", verify_samples);
    verify->add_option("--seed", verify_seed);
    verify->add_option("--tol", verify_tol);

    // ballvol
    CommonArgs ball_args;
    std::string ball_center;
    double ball_r = 1.0;
    long ball_samples = 200000;
    std::uint64_t ball_seed = 1;
    std::string ball_method = "monte_carlo";
    auto* ballvol = app.add_subcommand("ballvol", "forward metric ball volume");
    add_common(ballvol, ball_args);
    ballvol->add_option("--center", ball_center)->required();
    ballvol->add_option("--r", ball_r)->required();
    ballvol->add_option("--samples", ball_samples);
    ballvol->add_option("--seed", ball_seed);
    ballvol->add_option("--method", ball_method)->check(CLI::IsMember({"monte_carlo", "grid"}));

    // bgcheck
    CommonArgs bg_args;
    std::string bg_point, bg_rgrid = "0.25,0.5,0.75,1,1.25,1.5,1.75,2";
    double bg_N = 0.0, bg_K = 0.0;
    bool bg_K_given = false;
    long bg_samples = 200000;
    std::uint64_t bg_seed = 1;
    auto* bgcheck = app.add_subcommand("bgcheck", "Bishop-Gromov ratio monotonicity check");
    add_common(bgcheck, bg_args);
    bgcheck->add_option("--point", bg_point)->required();
    bgcheck->add_option("--N", bg_N)->required();
    auto* kopt = bgcheck->add_option("--K", bg_K, "override the curvature-dimension constant");
    bgcheck->add_option("--r-grid", bg_rgrid);
    bgcheck->add_option("--samples", bg_samples);
    bgcheck->add_option("--seed", bg_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }
    bg_K_given = kopt->count() > 0;

    const auto load = [](const CommonArgs& args) {
        return fhgeo::load_domain(fhgeo::DomainSpec::from_json_file(args.domain_path));
    };

    if (dist->parsed()) {
        const auto body = load(dist_args);
        const auto kind = fhgeo::metric_kind_from_string(dist_args.metric);
        const Vec x = parse_vector(from_text);
        const Vec y = parse_vector(to_text);
        const double dxy = fhgeo::metric_distance(kind, body, x, y);
        const double dyx = fhgeo::metric_distance(kind, body, y, x);
        const double funk_xy = fhgeo::funk_distance(body, x, y);
        const double funk_yx = fhgeo::funk_distance(body, y, x);
        const double hilbert = fhgeo::hilbert_distance(body, x, y);
        ordered_json j;
        j["metric"] = dist_args.metric;
        j["from"] = vec_json(x);
        j["to"] = vec_json(y);
        j["d_xy"] = dxy;
        j["d_yx"] = dyx;
        j["symmetrization_residual"] = std::abs(2.0 * hilbert - funk_xy - funk_yx);
        emit(j, dist_args.out);
        return kExitOk;
    }

    if (info->parsed()) {
        const auto body = load(info_args);
        const double margin = fhgeo::strong_convexity_margin(body, info_samples, info_seed);
        ordered_json j;
        j["family"] = body.family();
        j["dimension"] = body.dimension();
        j["box_min"] = vec_json(body.box_min());
        j["box_max"] = vec_json(body.box_max());
        j["interior_point"] = vec_json(body.interior_point());
        j["diameter"] = body.diameter();
        j["convexity_margin"] = margin;
        j["margin_samples"] = info_samples;
        j["seed"] = info_seed;
        emit(j, info_args.out);
        return kExitOk;
    }

    if (tensor->parsed()) {
        const auto body = load(tensor_args);
        const auto kind = fhgeo::metric_kind_from_string(tensor_args.metric);
        const fhgeo::TangentVector tv{parse_vector(tensor_point), parse_vector(tensor_vector)};
        fhgeo::DiffScheme scheme;
        if (fd_step > 0.0) scheme.step_fraction = fd_step;
        fhgeo::Mat g;
        if (tensor_route == "vertical")
            g = fhgeo::metric_tensor(kind, body, tv, scheme);
        else if (tensor_route == "horizontal")
            g = fhgeo::metric_tensor_horizontal(body, tv, scheme);
        else
            g = fhgeo::metric_tensor_graph_oracle(kind, body, tv);
        const double f = fhgeo::finsler_norm(kind, body, tv);
        ordered_json j;
        j["metric"] = tensor_args.metric;
        j["route"] = tensor_route;
        j["x"] = vec_json(tv.x);
        j["v"] = vec_json(tv.v);
        j["g"] = mat_json(g);
        j["g_vv"] = fhgeo::inner_product(g, tv.v, tv.v);
        j["F_squared"] = f * f;
        emit(j, tensor_args.out);
        return kExitOk;
    }

    if (ricci_cmd->parsed()) {
        const auto body = load(ricci_args);
        const auto kind = fhgeo::metric_kind_from_string(ricci_args.metric);
        const fhgeo::TangentVector tv{parse_vector(ricci_point), parse_vector(ricci_vector)};
        fhgeo::DiffScheme scheme;
        if (ricci_fd_step > 0.0) scheme.step_fraction = ricci_fd_step;
        scheme.curvature_tolerance = ricci_tol;
        const auto report = fhgeo::ricci(kind, body, tv, scheme);
        ordered_json j;
        j["metric"] = ricci_args.metric;
        j["x"] = vec_json(tv.x);
        j["v"] = vec_json(tv.v);
        j["ric"] = report.ricci_value;
        j["christoffel_norm"] = report.christoffel_norm;
        j["stencil_step"] = report.stencil_step;
        j["estimated_error"] = report.estimated_error;
        emit(j, ricci_args.out);
        return kExitOk;
    }

    if (wricci_cmd->parsed()) {
        const auto body = load(wricci_args);
        const auto kind = fhgeo::metric_kind_from_string(wricci_args.metric);
        const fhgeo::TangentVector tv{parse_vector(w_point), parse_vector(w_vector)};
        const auto rep = fhgeo::weighted_ricci(kind, body, tv, parse_N_list(w_N));
        emit(wricci_json(rep), wricci_args.out);
        if (w_strict)
            for (const auto& [name, dev] : rep.deviations)
                if (dev > w_tol) return kExitVerification;
        return kExitOk;
    }

    if (verify->parsed()) {
        const auto body = load(verify_args);
        const auto kind = fhgeo::metric_kind_from_string(verify_args.metric);
        auto rep = fhgeo::verify_theorems(kind, body, verify_samples, verify_seed, verify_tol);

        // Identity and cross-route sweeps alongside the theorem checks.
        const int n = body.dimension();
        double okada_max = 0.0, route_max = 0.0, gvv_max = 0.0;
        for (int i = 0; i < verify_samples; ++i) {
            auto rng = fhgeo::substream(verify_seed ^ 0xabcdef, i);
            const Vec x = fhgeo::sample_interior(body, rng, 0.02);
            const Vec v = fhgeo::unit_sphere_sample(rng, n);
            const fhgeo::TangentVector tv{x, v};
            const fhgeo::Mat vertical = fhgeo::metric_tensor(kind, body, tv);
            const fhgeo::Mat graph = fhgeo::metric_tensor_graph_oracle(kind, body, tv);
            route_max = std::max(route_max, (vertical - graph).norm() /
                                                std::max(vertical.norm(), graph.norm()));
            if (kind != fhgeo::MetricKind::Hilbert) {
                okada_max = std::max(okada_max, fhgeo::okada_residual(kind, body, tv));
                const fhgeo::Mat horizontal =
                    kind == fhgeo::MetricKind::Funk
                        ? fhgeo::metric_tensor_horizontal(body, tv)
                        : vertical;
                route_max = std::max(route_max, (vertical - horizontal).norm() /
                                                    std::max(vertical.norm(), horizontal.norm()));
            }
            const double f = fhgeo::finsler_norm(kind, body, tv);
            gvv_max = std::max(gvv_max, std::abs(fhgeo::inner_product(vertical, v, v) - f * f) /
                                            (f * f));
        }
        if (kind != fhgeo::MetricKind::Hilbert)
            rep.checks.push_back({"okada_residual", okada_max, 1e-6, okada_max <= 1e-6});
        rep.checks.push_back({"tensor_route_agreement", route_max, 1e-5, route_max <= 1e-5});
        rep.checks.push_back({"g_vv_equals_F_squared", gvv_max, 1e-7, gvv_max <= 1e-7});
        rep.all_pass = true;
        for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;

        ordered_json j;
        j["metric"] = verify_args.metric;
        j["domain"] = body.family();
        j["dimension"] = rep.dimension;
        j["samples"] = rep.samples;
        j["seed"] = rep.seed;
        j["tolerance"] = verify_tol;
        j["convexity_margin"] = rep.convexity_margin;
        j["warnings"] = rep.warnings;
        ordered_json checks = ordered_json::array();
        for (const auto& c : rep.checks) {
            ordered_json cj;
            cj["name"] = c.name;
            cj["max_deviation"] = c.max_deviation;
            cj["tolerance"] = c.tolerance;
            cj["pass"] = c.pass;
            checks.push_back(cj);
        }
        j["checks"] = checks;
        j["all_pass"] = rep.all_pass;
        emit(j, verify_args.out);

        for (const auto& c : rep.checks)
            std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << " max_dev=" << c.max_deviation
                      << " tol=" << c.tolerance << "\n";
        for (const auto& w : rep.warnings) std::cerr << "WARN " << w << "\n";
        return rep.all_pass ? kExitOk : kExitVerification;
    }

    if (ballvol->parsed()) {
        const auto body = load(ball_args);
        const auto kind = fhgeo::metric_kind_from_string(ball_args.metric);
        const auto method = ball_method == "grid" ? fhgeo::VolumeMethod::Grid
                                                  : fhgeo::VolumeMethod::MonteCarlo;
        const auto est = fhgeo::forward_ball_volume(kind, body, parse_vector(ball_center), ball_r,
                                                    method, ball_samples, ball_seed);
        ordered_json j;
        j["metric"] = ball_args.metric;
        j["center"] = vec_json(parse_vector(ball_center));
        j["r"] = ball_r;
        j["method"] = ball_method;
        j["samples"] = est.samples;
        j["seed"] = est.seed;
        j["volume"] = est.value;
        j["std_error"] = est.std_error;
        emit(j, ball_args.out);
        return kExitOk;
    }

    if (bgcheck->parsed()) {
        const auto body = load(bg_args);
        const auto kind = fhgeo::metric_kind_from_string(bg_args.metric);
        const Vec x = parse_vector(bg_point);
        const double K =
            bg_K_given ? bg_K : fhgeo::curvature_dimension_K(kind, body.dimension(), bg_N);
        const Vec grid_vec = parse_vector(bg_rgrid);
        const std::vector<double> grid(grid_vec.data(), grid_vec.data() + grid_vec.size());
        const auto rep = fhgeo::bishop_gromov_check(kind, body, x, bg_N, K, grid, bg_samples, bg_seed);
        ordered_json j;
        j["metric"] = bg_args.metric;
        j["point"] = vec_json(x);
        j["N"] = rep.N;
        j["K"] = rep.K;
        j["samples"] = bg_samples;
        j["seed"] = bg_seed;
        ordered_json pts = ordered_json::array();
        for (const auto& p : rep.points) {
            ordered_json pj;
            pj["r"] = p.radius;
            pj["volume"] = p.ball_volume;
            pj["std_error"] = p.std_error;
            pj["model_volume"] = p.model_volume;
            pj["ratio"] = p.ratio;
            pj["ratio_error"] = p.ratio_error;
            pts.push_back(pj);
        }
        j["points"] = pts;
        ordered_json viol = ordered_json::array();
        for (const auto& v : rep.violations) {
            ordered_json vj;
            vj["from_index"] = v.from_index;
            vj["to_index"] = v.to_index;
            vj["increase"] = v.increase;
            vj["threshold"] = v.threshold;
            viol.push_back(vj);
        }
        j["violations"] = viol;
        j["violation_count"] = rep.violations.size();
        emit(j, bg_args.out);
        return kExitOk;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fhgeo::GeometryError& e) {
        std::cerr << e.what() << "\n";
        return e.is_usage_error() ? kExitUsage : kExitGeometry;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeometry;
    }
}
