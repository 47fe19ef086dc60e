// soblab: command-line laboratory for sharp Sobolev constants, rearrangement,
// spectral gaps, isoperimetry, concentration diagnostics, and the Yamabe
// variational problem on weighted 1D model spaces.
//
// Exit codes: 0 success, 1 check failure (a verified inequality found a
// violator), 2 input/parse errors.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "soblab/concentration.hpp"
#include "soblab/constants.hpp"
#include "soblab/grid.hpp"
#include "soblab/mm_geometry.hpp"
#include "soblab/rearrangement.hpp"
#include "soblab/sobolev.hpp"
#include "soblab/yamabe.hpp"

using nlohmann::json;
using namespace soblab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

void emit(const json& report, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(output_path);
        if (!out)
            throw std::invalid_argument("cannot open output file " +
                                        output_path);
        out << report.dump(2) << "\n";
    }
}

// Shared grid selection: --model sphere|cone|custom with its parameters.
struct GridSpec {
    std::string model = "sphere";
    double N = 3.0;
    int nodes = 1024;
    double rmax = 1.0;
    std::string custom_path;  // JSON {"nodes":[...],"weights":[...]}
    bool normalize = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "Grid model: sphere, cone, custom")
            ->check(CLI::IsMember({"sphere", "cone", "custom"}));
        cmd->add_option("--N", N, "Dimension parameter N");
        cmd->add_option("--nodes", nodes, "Number of grid nodes");
        cmd->add_option("--rmax", rmax, "Cone model radius");
        cmd->add_option("--custom-grid", custom_path,
                        "JSON file with nodes/weights for a custom grid");
        cmd->add_flag("--normalize", normalize,
                      "Rescale the grid to total mass 1");
    }

    WeightedGrid build() const {
        WeightedGrid g = [&] {
            if (model == "sphere") return WeightedGrid::sphere_model(N, nodes);
            if (model == "cone")
                return WeightedGrid::cone_model(N, rmax, nodes);
            std::ifstream in(custom_path);
            if (!in)
                throw std::invalid_argument("cannot open grid file " +
                                            custom_path);
            json j;
            in >> j;
            return WeightedGrid::custom(
                j.at("nodes").get<std::vector<double>>(),
                j.at("weights").get<std::vector<double>>());
        }();
        return normalize ? g.normalized() : g;
    }

    json echo() const {
        json j{{"model", model}, {"N", N}, {"nodes", nodes}};
        if (model == "cone") j["rmax"] = rmax;
        if (model == "custom") j["custom_grid"] = custom_path;
        if (normalize) j["normalize"] = true;
        return j;
    }
};

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

struct Range {
    double lo = 0.0, hi = 0.0, step = 0.0;
};

Range parse_range(const std::string& spec) {
    Range r;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> r.lo >> c1 >> r.hi >> c2 >> r.step) || c1 != ':' || c2 != ':')
        throw std::invalid_argument("range must be lo:hi:step, got " + spec);
    if (!(r.step > 0.0) || r.hi < r.lo)
        throw std::invalid_argument("empty or invalid range " + spec);
    return r;
}

json function_norms(const SampledFunction& u, const std::vector<double>& ps) {
    json j;
    for (double p : ps) {
        std::ostringstream key;
        key << "L" << p;
        j[key.str()] = lp_norm(u, p);
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "soblab: numerical laboratory for sharp Sobolev inequalities, "
        "rearrangement, and the Yamabe problem on weighted 1D models"};
    app.require_subcommand(1);

    std::string output_path;
    uint64_t seed = 0;
    app.add_option("--output", output_path,
                   "Write the JSON report here instead of stdout");
    app.add_option("--seed", seed, "Root seed for randomized checks");

    // ---------------- constants ----------------
    auto* c_cmd = app.add_subcommand(
        "constants", "Closed-form constants: volumes and Sobolev constants");
    double c_N = 3.0, c_p = 2.0;
    double c_K = 0.0, c_r = -1.0;
    c_cmd->add_option("--N", c_N, "Dimension");
    c_cmd->add_option("--p", c_p, "Exponent p in (1,N)");
    c_cmd->add_option("--K", c_K, "Curvature for the comparison volume");
    c_cmd->add_option("--r", c_r, "Radius for the comparison volume");

    // ---------------- model ----------------
    auto* m_cmd =
        app.add_subcommand("model", "Build a model grid and report its data");
    GridSpec m_grid;
    m_grid.attach(m_cmd);

    // ---------------- rearrange ----------------
    auto* re_cmd = app.add_subcommand(
        "rearrange", "Monotone rearrangement of a sampled function");
    GridSpec re_grid;
    re_grid.attach(re_cmd);
    std::string re_input, re_out_fn, re_target = "sphere";
    double re_target_N = 3.0, re_cisop = 0.0, re_p = 2.0;
    re_cmd->add_option("--input", re_input, "Function file (CSV or JSON)")
        ->required();
    re_cmd->add_option("--output-function", re_out_fn,
                       "Write the rearranged function here");
    re_cmd->add_option("--target", re_target, "sphere or euclid")
        ->check(CLI::IsMember({"sphere", "euclid"}));
    re_cmd->add_option("--target-N", re_target_N, "Target dimension");
    re_cmd->add_option("--cisop", re_cisop,
                       "Isoperimetric constant for the euclid target check");
    re_cmd->add_option("--p", re_p, "Dirichlet exponent for the energy check");

    // ---------------- quotient ----------------
    auto* q_cmd = app.add_subcommand(
        "quotient", "Sobolev quotient of a sampled function");
    GridSpec q_grid;
    q_grid.attach(q_cmd);
    std::string q_input;
    double q_q = 3.0;
    q_cmd->add_option("--input", q_input, "Function file")->required();
    q_cmd->add_option("--q", q_q, "Exponent q > 2");

    // ---------------- spectral-gap ----------------
    auto* sg_cmd = app.add_subcommand(
        "spectral-gap", "First nontrivial Neumann eigenvalue");
    GridSpec sg_grid;
    sg_grid.attach(sg_cmd);

    // ---------------- aopt ----------------
    auto* a_cmd = app.add_subcommand(
        "aopt", "Maximize the Sobolev quotient (lower bound for A_q^opt)");
    GridSpec a_grid;
    a_grid.attach(a_cmd);
    double a_q = 3.0;
    int a_restarts = 8, a_max_iter = 5000;
    std::string a_sweep;
    a_cmd->add_option("--q", a_q, "Exponent q > 2");
    a_cmd->add_option("--restarts", a_restarts, "Seeded restarts");
    a_cmd->add_option("--max-iter", a_max_iter, "Iteration cap per restart");
    a_cmd->add_option("--sweep", a_sweep,
                      "Range lo:hi:step over q; emits CSV q,value,iters");

    // ---------------- bliss ----------------
    auto* b_cmd = app.add_subcommand(
        "bliss", "Quotient of the explicit extremal profile on the cone");
    double b_b = 1.0, b_N = 3.0, b_p = 2.0, b_R = 200.0;
    int b_nodes = 100000;
    b_cmd->add_option("--b", b_b, "Profile parameter b > 0");
    b_cmd->add_option("--N", b_N, "Dimension");
    b_cmd->add_option("--p", b_p, "Exponent p in (1,N)");
    b_cmd->add_option("--rmax", b_R, "Truncation radius");
    b_cmd->add_option("--nodes", b_nodes, "Grid nodes");

    // ---------------- alpha-p ----------------
    auto* al_cmd = app.add_subcommand(
        "alpha-p", "Optimal loose-Sobolev constant from the minimal density");
    double al_theta = 1.0, al_N = 3.0, al_p = 2.0;
    bool al_inf = false;
    al_cmd->add_option("--theta", al_theta, "Minimal density");
    al_cmd->add_flag("--theta-infinite", al_inf,
                     "Collapsed case (infinite density)");
    al_cmd->add_option("--N", al_N, "Dimension");
    al_cmd->add_option("--p", al_p, "Exponent");

    // ---------------- linearize ----------------
    auto* l_cmd = app.add_subcommand(
        "linearize", "Quotient linearization check near constants");
    GridSpec l_grid;
    l_grid.attach(l_cmd);
    double l_q = 3.0;
    std::string l_eps = "0.1,0.03,0.01,0.003,0.001", l_input;
    l_cmd->add_option("--q", l_q, "Exponent q > 2");
    l_cmd->add_option("--eps", l_eps, "Comma-separated epsilon list");
    l_cmd->add_option("--input", l_input,
                      "Zero-mean perturbation file (default: cos profile)");

    // ---------------- tight-check ----------------
    auto* t_cmd = app.add_subcommand(
        "tight-check", "Verify the tight Sobolev inequality with constant A");
    GridSpec t_grid;
    t_grid.attach(t_cmd);
    double t_q = 3.0, t_A = 1.0;
    int t_trials = 1000;
    std::string t_witness;
    t_cmd->add_option("--q", t_q, "Exponent q > 2");
    t_cmd->add_option("--A", t_A, "Leading constant to verify")->required();
    t_cmd->add_option("--trials", t_trials, "Random trials");
    t_cmd->add_option("--witness", t_witness,
                      "Write the sharpest/violating trial here");

    // ---------------- density ----------------
    auto* d_cmd = app.add_subcommand(
        "density", "Bishop-Gromov density profile at a point");
    GridSpec d_grid;
    d_grid.attach(d_cmd);
    double d_x = 0.0;
    std::string d_radii = "0.02,0.04,0.08,0.16", d_mms;
    int d_center = 0;
    d_cmd->add_option("--x", d_x, "Center (grid coordinate)");
    d_cmd->add_option("--radii", d_radii, "Comma-separated radii");
    d_cmd->add_option("--mms", d_mms,
                      "Finite metric measure space JSON (overrides --model)");
    d_cmd->add_option("--center-index", d_center,
                      "Center index for --mms input");

    // ---------------- avr ----------------
    auto* av_cmd = app.add_subcommand(
        "avr", "Asymptotic volume ratio estimate on a cone-like grid");
    GridSpec av_grid;
    av_grid.model = "cone";
    av_grid.attach(av_cmd);
    double av_x = 0.0;
    av_cmd->add_option("--x", av_x, "Center");

    // ---------------- isop ----------------
    auto* i_cmd = app.add_subcommand(
        "isop", "Empirical isoperimetric constant of a region");
    GridSpec i_grid;
    i_grid.attach(i_cmd);
    double i_lo = 0.0, i_hi = 1.0;
    i_cmd->add_option("--region-lo", i_lo, "Region start");
    i_cmd->add_option("--region-hi", i_hi, "Region end");

    // ---------------- brunn-minkowski ----------------
    auto* bm_cmd = app.add_subcommand(
        "brunn-minkowski", "Interval Brunn-Minkowski inequality check");
    GridSpec bm_grid;
    bm_grid.attach(bm_cmd);
    double bm_a0 = 0.0, bm_b0 = 0.5, bm_a1 = 1.0, bm_b1 = 1.5;
    double bm_t = 0.5, bm_K = 0.0;
    bm_cmd->add_option("--a0", bm_a0, "A0 start");
    bm_cmd->add_option("--b0", bm_b0, "A0 end");
    bm_cmd->add_option("--a1", bm_a1, "A1 start");
    bm_cmd->add_option("--b1", bm_b1, "A1 end");
    bm_cmd->add_option("--t", bm_t, "Interpolation parameter in [0,1]");
    bm_cmd->add_option("--K", bm_K, "Curvature parameter");

    // ---------------- local-sobolev ----------------
    auto* ls_cmd = app.add_subcommand(
        "local-sobolev", "Local Euclidean Sobolev inequality check");
    GridSpec ls_grid;
    ls_grid.model = "cone";
    ls_grid.attach(ls_cmd);
    double ls_x = 0.0, ls_r = 0.05, ls_R = 1.0, ls_p = 2.0;
    int ls_trials = 500;
    ls_cmd->add_option("--x", ls_x, "Center");
    ls_cmd->add_option("--r", ls_r, "Support radius");
    ls_cmd->add_option("--R", ls_R, "Density radius (r < R)");
    ls_cmd->add_option("--p", ls_p, "Exponent p in (1,N)");
    ls_cmd->add_option("--trials", ls_trials, "Random trials");

    // ---------------- concentration-scan ----------------
    auto* cs_cmd = app.add_subcommand(
        "concentration-scan", "Classify a sequence of sampled functions");
    GridSpec cs_grid;
    cs_grid.attach(cs_cmd);
    std::string cs_manifest;
    double cs_q = 3.0, cs_ball_fraction = 0.9, cs_decay = 0.1;
    cs_cmd->add_option("--manifest", cs_manifest,
                       "JSON list of function files, in sequence order")
        ->required();
    cs_cmd->add_option("--q", cs_q, "Normalization exponent");
    cs_cmd->add_option("--ball-fraction", cs_ball_fraction,
                       "Concentration ball mass threshold");
    cs_cmd->add_option("--decay-factor", cs_decay, "L2 decay threshold");

    // ---------------- yamabe ----------------
    auto* y_cmd = app.add_subcommand(
        "yamabe", "Generalized Yamabe constant minimization");
    GridSpec y_grid;
    y_grid.attach(y_cmd);
    std::string y_scalar, y_family;
    double y_const = 0.0, y_declared_p = 0.0;
    bool y_have_const = false;
    y_cmd->add_option("--scalar", y_scalar, "Scalar term file (CSV node,S)");
    y_cmd
        ->add_option("--scalar-const", y_const,
                     "Constant scalar term (instead of a file)")
        ->each([&](const std::string&) { y_have_const = true; });
    y_cmd->add_option("--scalar-p", y_declared_p,
                      "Declared integrability exponent (default N)");
    y_cmd->add_option("--family", y_family,
                      "Manifest for a continuity trend run");

    // ---------------- sweep ----------------
    auto* sw_cmd = app.add_subcommand(
        "sweep", "CSV sweep of one ranged parameter");
    GridSpec sw_grid;
    sw_grid.attach(sw_cmd);
    std::string sw_target = "aopt", sw_range;
    double sw_p = 2.0, sw_q = 3.0;
    sw_cmd->add_option("--target", sw_target, "aopt (over q) or eucl (over N)")
        ->check(CLI::IsMember({"aopt", "eucl"}));
    sw_cmd->add_option("--range", sw_range, "lo:hi:step")->required();
    sw_cmd->add_option("--p", sw_p, "Exponent p for the eucl sweep");
    sw_cmd->add_option("--q", sw_q, "(unused for aopt sweeps: q is ranged)");

    // Let global options (--seed, --output) appear after the subcommand too.
    for (CLI::App* sc : app.get_subcommands([](CLI::App*) { return true; }))
        sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        json report;
        int exit_code = kExitOk;

        if (*c_cmd) {
            report["config"] = {{"N", c_N}, {"p", c_p}};
            report["omega_N"] = unit_ball_volume(c_N);
            report["sigma_N_minus_1"] = unit_sphere_volume(c_N);
            report["eucl"] = eucl_constant(c_N, c_p);
            if (c_N > 2.0) report["eucl_2"] = eucl_constant_2(c_N);
            if (c_r >= 0.0) {
                report["comparison_volume"] = comparison_volume(c_K, c_N, c_r);
                report["config"]["K"] = c_K;
                report["config"]["r"] = c_r;
            }
        } else if (*m_cmd) {
            const WeightedGrid g = m_grid.build();
            report["config"] = m_grid.echo();
            report["total_mass"] = g.total_mass();
            report["diameter"] = g.diameter();
            report["n_nodes"] = g.n_nodes();
        } else if (*re_cmd) {
            const WeightedGrid g = re_grid.build();
            const SampledFunction u = load_function(g, re_input);
            const auto target =
                re_target == "sphere"
                    ? RearrangementTarget::sphere(re_target_N)
                    : RearrangementTarget::euclid(re_target_N, re_cisop);
            const PolyaSzegoReport psr = polya_szego_report(u, re_p, target);
            const std::vector<double> ps{1.0, 2.0, re_p};
            report["config"] = re_grid.echo();
            report["norms_in"] = function_norms(u, ps);
            report["norms_out"] = function_norms(psr.rearranged.fn, ps);
            report["energy_in"] = psr.energy_in;
            report["energy_out"] = psr.energy_out;
            report["passed"] = psr.passed;
            if (!re_out_fn.empty()) save_function(psr.rearranged.fn, re_out_fn);
            if (!psr.passed) exit_code = kExitCheckFailed;
        } else if (*q_cmd) {
            const WeightedGrid g = q_grid.build();
            const SampledFunction u = load_function(g, q_input);
            report["config"] = q_grid.echo();
            report["q"] = q_q;
            report["quotient"] = sobolev_quotient(u, q_q);
        } else if (*sg_cmd) {
            const WeightedGrid g = sg_grid.build();
            const SpectralGapResult r = spectral_gap(g, true);
            report["config"] = sg_grid.echo();
            report["lambda"] = r.lambda;
            report["residual"] = r.residual;
        } else if (*a_cmd) {
            const WeightedGrid g = a_grid.build();
            AoptOptions opts;
            opts.n_restarts = a_restarts;
            opts.max_iter = a_max_iter;
            opts.seed = seed;
            if (!a_sweep.empty()) {
                const Range r = parse_range(a_sweep);
                std::ostringstream csv;
                csv << "# q,value,iters\n";
                for (double q = r.lo; q <= r.hi + 1e-12; q += r.step) {
                    const QuotientReport qr = optimize_aopt(g, q, opts);
                    csv << q << "," << qr.value << "," << qr.iterations
                        << "\n";
                }
                if (output_path.empty()) {
                    std::cout << csv.str();
                } else {
                    std::ofstream out(output_path);
                    out << csv.str();
                }
                return kExitOk;
            }
            const QuotientReport qr = optimize_aopt(g, a_q, opts);
            report["config"] = a_grid.echo();
            report["q"] = a_q;
            report["seed"] = seed;
            report["value"] = qr.value;
            report["iterations"] = qr.iterations;
            report["grad_norm_final"] = qr.grad_norm_final;
            report["converged"] = qr.converged;
        } else if (*b_cmd) {
            report["config"] = {{"b", b_b},
                                {"N", b_N},
                                {"p", b_p},
                                {"rmax", b_R},
                                {"nodes", b_nodes}};
            report["quotient"] = bliss_quotient(b_b, b_N, b_p, b_R, b_nodes);
            report["eucl"] = eucl_constant(b_N, b_p);
        } else if (*al_cmd) {
            const double theta =
                al_inf ? std::numeric_limits<double>::infinity() : al_theta;
            report["config"] = {{"theta", al_inf ? json("infinite")
                                                 : json(al_theta)},
                                {"N", al_N},
                                {"p", al_p}};
            report["alpha_p"] = alpha_p_value(theta, al_N, al_p);
        } else if (*l_cmd) {
            const WeightedGrid g = l_grid.build();
            SampledFunction f =
                l_input.empty()
                    ? SampledFunction::from(
                          g,
                          [&](double t) {
                              const double lo = g.nodes().front();
                              const double L =
                                  g.nodes().back() - g.nodes().front();
                              return std::cos(std::numbers::pi * (t - lo) / L);
                          })
                    : load_function(g, l_input);
            // Remove any residual mean so the check's precondition holds.
            const double fbar = mean(f);
            for (double& v : f.values) v -= fbar;
            const LinearizationReport r =
                linearization_check(g, f, l_q, parse_list(l_eps));
            report["config"] = l_grid.echo();
            report["q"] = l_q;
            report["eps"] = r.eps;
            report["lhs"] = r.lhs;
            report["rhs"] = r.rhs;
            report["defect"] = r.defect;
            report["fitted_order"] = r.fitted_order;
        } else if (*t_cmd) {
            const WeightedGrid g = t_grid.build();
            const TightCheckResult r =
                tight_sobolev_check(g, t_q, t_A, t_trials, seed);
            report["config"] = t_grid.echo();
            report["q"] = t_q;
            report["A"] = t_A;
            report["seed"] = seed;
            report["passed"] = r.passed;
            report["worst_margin"] = r.worst_margin;
            report["violating_trial"] = r.violating_trial;
            if (!t_witness.empty() && r.witness.grid != nullptr)
                save_function(r.witness, t_witness);
            if (!r.passed) exit_code = kExitCheckFailed;
        } else if (*d_cmd) {
            const std::vector<double> radii = parse_list(d_radii);
            DensityProfile prof;
            if (!d_mms.empty()) {
                const DiscreteMMS s = DiscreteMMS::load(d_mms);
                prof = density_profile(s, d_center, d_grid.N, radii);
                report["config"] = {{"mms", d_mms},
                                    {"center_index", d_center},
                                    {"N", d_grid.N}};
            } else {
                const WeightedGrid g = d_grid.build();
                prof = density_profile(g, d_x, d_grid.N, radii);
                report["config"] = d_grid.echo();
                report["config"]["x"] = d_x;
            }
            report["radii"] = prof.radii;
            report["theta_r"] = prof.theta_r;
            report["infinite"] = prof.infinite;
            report["theta_smallest"] = prof.theta_smallest;
            report["theta_sup"] = prof.theta_sup;
            report["theta_0_estimate"] = prof.theta_0_estimate;
        } else if (*av_cmd) {
            const WeightedGrid g = av_grid.build();
            report["config"] = av_grid.echo();
            report["avr"] = avr_estimate(g, av_x, av_grid.N);
        } else if (*i_cmd) {
            const WeightedGrid g = i_grid.build();
            report["config"] = i_grid.echo();
            report["region"] = {i_lo, i_hi};
            report["c_isop"] = isoperimetric_constant(g, i_lo, i_hi, i_grid.N);
            report["sharp_cone_value"] =
                i_grid.N *
                std::pow(unit_ball_volume(i_grid.N), 1.0 / i_grid.N);
        } else if (*bm_cmd) {
            const WeightedGrid g = bm_grid.build();
            const BrunnMinkowskiReport r = brunn_minkowski_check(
                g, bm_a0, bm_b0, bm_a1, bm_b1, bm_t, bm_K, bm_grid.N);
            report["config"] = bm_grid.echo();
            report["vacuous"] = r.vacuous;
            report["passed"] = r.passed;
            report["lhs"] = r.lhs;
            report["rhs"] = r.rhs;
            report["theta"] = r.theta;
            if (!r.passed) exit_code = kExitCheckFailed;
        } else if (*ls_cmd) {
            const WeightedGrid g = ls_grid.build();
            const LocalSobolevReport r = local_sobolev_check(
                g, ls_x, ls_r, ls_R, ls_grid.N, ls_p, ls_trials, seed);
            report["config"] = ls_grid.echo();
            report["seed"] = seed;
            report["outside_regime"] = r.outside_regime;
            report["passed"] = r.passed;
            report["bound"] = r.bound;
            report["sharpest_ratio"] = r.sharpest_ratio;
            report["eps"] = r.eps;
            if (!r.outside_regime && !r.passed) exit_code = kExitCheckFailed;
        } else if (*cs_cmd) {
            const WeightedGrid g = cs_grid.build();
            std::ifstream in(cs_manifest);
            if (!in)
                throw std::invalid_argument("cannot open manifest " +
                                            cs_manifest);
            json manifest;
            in >> manifest;
            std::vector<SampledFunction> seq;
            for (const auto& entry : manifest)
                seq.push_back(load_function(g, entry.get<std::string>()));
            ConcentrationConfig cfg;
            cfg.ball_fraction = cs_ball_fraction;
            cfg.decay_factor = cs_decay;
            const SequenceDiagnostics diag =
                classify_sequence(g, seq, cs_q, cfg);
            const char* names[] = {"non_constant_limit", "constant_limit",
                                   "concentration", "inconclusive"};
            report["config"] = cs_grid.echo();
            report["q"] = cs_q;
            report["classification"] =
                names[static_cast<int>(diag.classification)];
            report["location"] = diag.location;
            report["mass_in_shrinking_balls"] = diag.mass_in_shrinking_balls;
            report["l2_norms"] = diag.l2_norms;
            report["energy"] = diag.energy;
            report["conc_radii"] = diag.conc_radii;
            report["thresholds"] = {{"ball_fraction", cfg.ball_fraction},
                                    {"decay_factor", cfg.decay_factor}};
        } else if (*y_cmd) {
            const double N = y_grid.N;
            const double declared_p = y_declared_p > 0.0 ? y_declared_p : N;
            YamabeOptions opts;
            opts.seed = seed;
            if (!y_family.empty()) {
                std::ifstream in(y_family);
                if (!in)
                    throw std::invalid_argument("cannot open manifest " +
                                                y_family);
                json manifest;
                in >> manifest;
                // Manifest entries: {"exponent_offset": 1/k} weight families
                // sin^{N-1+offset}, all with the same constant scalar term.
                std::vector<WeightedGrid> grids;
                std::vector<ScalarField> fields;
                for (const auto& entry : manifest) {
                    const double off = entry.at("exponent_offset").get<double>();
                    grids.push_back(WeightedGrid::sphere_model(
                        N + off, y_grid.nodes));
                }
                for (auto& g : grids)
                    fields.emplace_back(
                        g, std::vector<double>(g.n_nodes(), y_const),
                        declared_p, N);
                std::vector<const WeightedGrid*> gp;
                std::vector<const ScalarField*> sp;
                for (size_t k = 0; k < grids.size(); ++k) {
                    gp.push_back(&grids[k]);
                    sp.push_back(&fields[k]);
                }
                const TrendReport tr = lambda_continuity_trend(gp, sp, N, opts);
                report["config"] = y_grid.echo();
                report["lambdas"] = tr.lambdas;
                report["max_successive_jump"] = tr.max_successive_jump;
                report["cauchy"] = tr.cauchy;
            } else {
                const WeightedGrid g = y_grid.build();
                const ScalarField S =
                    !y_scalar.empty()
                        ? ScalarField(g,
                                      load_function(g, y_scalar).values,
                                      declared_p, N)
                        : ScalarField(g,
                                      std::vector<double>(g.n_nodes(),
                                                          y_const),
                                      declared_p, N);
                const YamabeReport r = minimize_yamabe(g, S, N, opts);
                report["config"] = y_grid.echo();
                report["seed"] = seed;
                report["lambda"] = r.lambda_estimate;
                report["el_residual"] = r.el_residual;
                report["iterations"] = r.iterations;
                report["converged"] = r.converged;
                report["unbounded_suspected"] = r.unbounded_suspected;
            }
        } else if (*sw_cmd) {
            const Range r = parse_range(sw_range);
            std::ostringstream csv;
            if (sw_target == "aopt") {
                const WeightedGrid g = sw_grid.build();
                AoptOptions opts;
                opts.seed = seed;
                csv << "# q,value,iters\n";
                for (double q = r.lo; q <= r.hi + 1e-12; q += r.step) {
                    const QuotientReport qr = optimize_aopt(g, q, opts);
                    csv << q << "," << qr.value << "," << qr.iterations
                        << "\n";
                }
            } else {
                csv << "# N,eucl\n";
                for (double N = r.lo; N <= r.hi + 1e-12; N += r.step)
                    csv << N << "," << eucl_constant(N, sw_p) << "\n";
            }
            if (output_path.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(output_path);
                out << csv.str();
            }
            return kExitOk;
        }

        emit(report, output_path);
        return exit_code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
