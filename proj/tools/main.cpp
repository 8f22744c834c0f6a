// flatpaths: command-line front end for the fc library.
//
// Verbs: classify, regions, census, curve {analyze,quasicrit,lift}, stretch,
// pulley, degree, audit. Output is JSON (CSV for sampled function tables).
// Exit codes: 0 success, 2 domain/usage errors, 1 I/O errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fc/classify.hpp"
#include "fc/curves.hpp"
#include "fc/maps.hpp"
#include "fc/stretch.hpp"
#include "fc/strings.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;
using fc::curves::PCCPath;
using fc::curves::UTPoint;
using fc::strings::SignString;

constexpr double PI = 3.141592653589793238462643383279502884;

// I/O failures map to exit code 1; everything else thrown is a domain error.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::array<double, 2> parse_pair(const std::string& text,
                                 const std::string& flag) {
    std::istringstream is(text);
    double a = 0.0, b = 0.0;
    char comma = 0;
    if (!(is >> a >> comma >> b) || comma != ',' || !(is >> std::ws).eof())
        throw std::invalid_argument(flag + " expects RE,IM");
    return {a, b};
}

std::vector<double> parse_list(const std::string& text,
                               const std::string& flag) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(flag + ": bad number '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(flag + " is empty");
    return out;
}

void check_theta1(double theta1) {
    if (!(std::abs(theta1) < PI))
        throw std::domain_error("--theta1 must satisfy |theta1| < pi");
}

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

PCCPath read_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("malformed curve JSON in " + path + ": " + e.what());
    }
    PCCPath g;
    try {
        g.start = {j.at("start").at(0).get<double>(),
                   j.at("start").at(1).get<double>()};
        g.theta0 = j.at("theta0").get<double>();
        for (const auto& s : j.at("segments"))
            g.segments.push_back({s.at("kappa").get<double>(),
                                  s.at("length").get<double>()});
    } catch (const std::exception& e) {
        throw IoError("malformed curve JSON in " + path + ": " + e.what());
    }
    fc::curves::validate(g);  // domain errors propagate as exit 2
    return g;
}

// Curve JSON is printed with 17 significant digits so that emitted curves
// re-parse bit-stably.
std::string curve_text(const PCCPath& g) {
    std::ostringstream os;
    os << "{\"start\":[" << num17(g.start[0]) << "," << num17(g.start[1])
       << "],\"theta0\":" << num17(g.theta0) << ",\"segments\":[";
    for (size_t i = 0; i < g.segments.size(); ++i) {
        if (i) os << ",";
        os << "{\"kappa\":" << num17(g.segments[i].kappa)
           << ",\"length\":" << num17(g.segments[i].length) << "}";
    }
    os << "]}";
    return os.str();
}

json class_json(const fc::classify::HomotopyClass& c) {
    if (!c.spherical) return json{{"kind", "E"}};
    return json{{"kind", "sphere"}, {"n", c.n}};
}

const char* class_name(fc::curves::CurveClass c) {
    switch (c) {
        case fc::curves::CurveClass::Condensed: return "condensed";
        case fc::curves::CurveClass::Critical: return "critical";
        default: return "diffuse";
    }
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homotopy type of bounded-curvature planar curve spaces"};
    app.require_subcommand(1);
    long seed = 0;
    app.add_option("--seed", seed,
                   "Seed for any sampling randomness (reproducibility)");

    // classify
    std::string q_text, basis_text, out_path, in_path, sigma_text, tau_text;
    double theta1 = 0.0, radius = 0.0, phi = 0.0, eps = -1.0, delta = 0.05;
    int kmax = 3, samples = 0, nmax = 10, width = 800, grid = 400;

    auto* cmd_classify = app.add_subcommand("classify", "Homotopy class at Q");
    cmd_classify->add_option("--q", q_text, "Endpoint RE,IM")->required();
    cmd_classify->add_option("--theta1", theta1, "Final tangent argument")
        ->required();

    auto* cmd_regions =
        app.add_subcommand("regions", "SVG diagram of the class regions");
    cmd_regions->add_option("--theta1", theta1)->required();
    cmd_regions->add_option("--kmax", kmax, "Largest band index");
    cmd_regions->add_option("--out", out_path, "Output SVG file");
    int svg_samples = 160;
    cmd_regions->add_option("--samples", svg_samples, "Boundary samples");
    cmd_regions->add_option("--width", width, "Image width in pixels");

    auto* cmd_census =
        app.add_subcommand("census", "Class counts over a lattice disk");
    cmd_census
        ->add_option("--basis", basis_text, "Lattice basis A_RE,A_IM,B_RE,B_IM")
        ->required();
    cmd_census->add_option("--theta1", theta1)->required();
    cmd_census->add_option("--radius", radius)->required();
    cmd_census->add_option("--nmax", nmax, "Largest sphere dimension counted");

    auto* cmd_curve = app.add_subcommand("curve", "Curve-file operations");
    cmd_curve->require_subcommand(1);
    auto* cmd_analyze =
        cmd_curve->add_subcommand("analyze", "Stats and trichotomy class");
    cmd_analyze->add_option("--in", in_path, "Curve JSON file")->required();
    auto* cmd_quasicrit = cmd_curve->add_subcommand(
        "quasicrit", "Quasicritical certificate and h-map");
    cmd_quasicrit->add_option("--in", in_path, "Curve JSON file")->required();
    cmd_quasicrit->add_option("--phi", phi, "Axis argument")->required();
    cmd_quasicrit->add_option("--eps", eps,
                              "Detection scale (omit to scan the dyadic grid)");
    cmd_quasicrit->add_option("--sigma", sigma_text, "Sign string, e.g. +-")
        ->required();
    auto* cmd_lift =
        cmd_curve->add_subcommand("lift", "Axis lift and membership flags");
    cmd_lift->add_option("--in", in_path, "Curve JSON file")->required();
    cmd_lift->add_option("--q", q_text, "Endpoint RE,IM")->required();
    cmd_lift->add_option("--theta1", theta1)->required();
    cmd_lift->add_option("--delta", delta, "Blend half-width near full turn");

    auto* cmd_stretch =
        app.add_subcommand("stretch", "Stretched boundary-value function");
    double kappa0 = 0.9, b = 0.0, r0 = 0.0, rb = 0.0, A = 0.0, s = 0.0;
    cmd_stretch->add_option("--kappa0", kappa0)->required();
    cmd_stretch->add_option("--b", b)->required();
    cmd_stretch->add_option("--r0", r0)->required();
    cmd_stretch->add_option("--rb", rb)->required();
    cmd_stretch->add_option("--A", A)->required();
    cmd_stretch->add_option("--s", s, "Domain extension");
    int table_samples = 100;
    cmd_stretch->add_option("--samples", table_samples, "CSV rows");

    auto* cmd_pulley = app.add_subcommand("pulley", "Model pulley curve");
    std::string offsets_text, lengths_text;
    cmd_pulley->add_option("--phi", phi, "Axis argument")->required();
    cmd_pulley->add_option("--sigma", sigma_text, "Sign string")->required();
    cmd_pulley->add_option("--offsets", offsets_text, "Argument offsets x_k")
        ->required();
    cmd_pulley->add_option("--lengths", lengths_text, "Segment lengths")
        ->required();
    cmd_pulley->add_option("--q", q_text, "Fit the endpoint to RE,IM");
    cmd_pulley->add_option("--theta1", theta1, "Final tangent argument");
    cmd_pulley->add_option("--kappa0", kappa0, "Arc curvature in (1/2,1)");

    auto* cmd_degree =
        app.add_subcommand("degree", "Winding of the composite sphere map");
    cmd_degree->add_option("--q", q_text, "Endpoint RE,IM")->required();
    cmd_degree->add_option("--theta1", theta1)->required();
    int deg_samples = 720;
    cmd_degree->add_option("--samples", deg_samples, "Loop samples");
    cmd_degree->add_option("--tau", tau_text,
                           "Top type: count pole preimages on a grid instead");
    cmd_degree->add_option("--grid", grid, "Grid side for --tau");

    auto* cmd_audit =
        app.add_subcommand("audit", "Region disjointness/symmetry audit");
    cmd_audit->add_option("--theta1", theta1)->required();
    cmd_audit->add_option("--kmax", kmax, "Largest band index");
    cmd_audit->add_option("--grid", grid, "Audit grid side");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n"
                  << app.help("", CLI::AppFormatMode::Normal);
        return 2;
    }
    (void)seed;  // all sampling below is deterministic

    try {
        if (*cmd_classify) {
            check_theta1(theta1);
            UTPoint Q{parse_pair(q_text, "--q"), theta1};
            emit(class_json(fc::classify::homotopy_class(Q)));
        } else if (*cmd_regions) {
            check_theta1(theta1);
            std::string svg =
                fc::classify::region_svg(theta1, kmax, width, svg_samples);
            if (out_path.empty()) {
                std::cout << svg;
            } else {
                std::ofstream out(out_path);
                if (!out) throw IoError("cannot write " + out_path);
                out << svg;
                if (!out) throw IoError("write failed: " + out_path);
            }
        } else if (*cmd_census) {
            check_theta1(theta1);
            auto v = parse_list(basis_text, "--basis");
            if (v.size() != 4)
                throw std::invalid_argument(
                    "--basis expects A_RE,A_IM,B_RE,B_IM");
            auto counts = fc::classify::census({v[0], v[1]}, {v[2], v[3]},
                                               theta1, radius, nmax);
            json out = json::object();
            int total = 0;
            for (const auto& [cls, n] : counts) {
                out[cls.text()] = n;
                total += n;
            }
            emit(json{{"counts", out}, {"total", total}});
        } else if (*cmd_analyze) {
            auto g = read_curve(in_path);
            auto st = fc::curves::curve_stats(g);
            auto v = fc::curves::classify_curve(g);
            json out{{"omega", st.omega},
                     {"turning", st.theta1},
                     {"class", class_name(v.cls)},
                     {"phi_bar", st.phi_bar},
                     {"theta_min", st.theta_min},
                     {"theta_max", st.theta_max}};
            if (v.type) out["type"] = v.type->text();
            emit(out);
        } else if (*cmd_quasicrit) {
            auto g = read_curve(in_path);
            auto sigma = SignString::parse(sigma_text);
            std::optional<fc::curves::QuasiCert> cert;
            if (cmd_quasicrit->count("--eps")) {
                cert = fc::curves::quasicritical_find(g, phi, eps, sigma);
            } else {
                for (double e : fc::curves::epsilon_grid())
                    if ((cert = fc::curves::quasicritical_find(g, phi, e,
                                                               sigma)))
                        break;
            }
            if (!cert) {
                emit(json{{"found", false}});
            } else {
                auto h = fc::curves::h_map(g, *cert);
                emit(json{{"found", true},
                          {"phi", cert->phi},
                          {"eps", cert->eps},
                          {"sigma", cert->sigma.text()},
                          {"J", cert->J},
                          {"I", cert->I},
                          {"h", h}});
            }
        } else if (*cmd_lift) {
            check_theta1(theta1);
            auto g = read_curve(in_path);
            UTPoint Q{parse_pair(q_text, "--q"), theta1};
            double lift_phi = fc::curves::lift_to_N(g, Q, delta);
            auto m = fc::curves::v_membership(g, lift_phi, Q);
            json vs = json::array();
            for (const auto& [sig, e] : m.v_sigma)
                vs.push_back(json{{"sigma", sig.text()}, {"eps", e}});
            emit(json{{"phi", lift_phi},
                      {"in_r", m.in_r},
                      {"v_c", m.v_c},
                      {"v_d", m.v_d},
                      {"v_sigma", vs}});
        } else if (*cmd_stretch) {
            fc::stretch::StretchProblem p{kappa0, b, r0, rb, A};
            fc::stretch::validate(p);
            if (s < 0.0) throw std::domain_error("--s must be >= 0");
            const double c = b + s;
            const double mu = fc::stretch::solve_mu(p, c);
            if (table_samples < 2)
                throw std::domain_error("--samples must be >= 2");
            std::cout << "# mu = " << num17(mu) << "\n";
            std::cout << "x,f\n";
            for (int i = 0; i < table_samples; ++i) {
                const double x = c * i / (table_samples - 1);
                std::cout << num17(x) << ","
                          << num17(fc::stretch::zeta_eval(p, mu, c, x)) << "\n";
            }
        } else if (*cmd_pulley) {
            check_theta1(theta1);
            auto sigma = SignString::parse(sigma_text);
            auto x = parse_list(offsets_text, "--offsets");
            auto len = parse_list(lengths_text, "--lengths");
            auto p = fc::maps::pulley_build(phi, sigma, x, len, kappa0, theta1);
            if (cmd_pulley->count("--q"))
                p = fc::maps::pulley_fit(p, parse_pair(q_text, "--q"));
            std::cout << curve_text(p.path) << "\n";
        } else if (*cmd_degree) {
            check_theta1(theta1);
            UTPoint Q{parse_pair(q_text, "--q"), theta1};
            if (cmd_degree->count("--tau")) {
                auto tau = SignString::parse(tau_text);
                emit(json{
                    {"count", fc::maps::preimage_count(Q, tau, grid)}});
            } else {
                emit(json{{"winding", fc::maps::degree_check(Q, deg_samples)}});
            }
        } else if (*cmd_audit) {
            check_theta1(theta1);
            auto r = fc::classify::region_audit(theta1, kmax, grid);
            emit(json{{"samples", r.samples},
                      {"overlap_violations", r.overlap_violations},
                      {"symmetry_violations", r.symmetry_violations},
                      {"profile_violations", r.profile_violations},
                      {"clean", r.clean()},
                      {"notes", r.notes}});
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
