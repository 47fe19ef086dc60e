#include "soblab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "soblab/constants.hpp"

namespace soblab {

namespace {

// 5-point Gauss-Legendre on [-1,1].
constexpr double kG5x[5] = {-0.906179845938663992797626878299,
                            -0.538469310105683091036314420700, 0.0,
                            0.538469310105683091036314420700,
                            0.906179845938663992797626878299};
constexpr double kG5w[5] = {0.236926885056189087514264040720,
                            0.478628670499366468041291514836,
                            0.568888888888888888888888888889,
                            0.478628670499366468041291514836,
                            0.236926885056189087514264040720};

template <class F>
double gauss5(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += kG5w[i] * f(c + h * kG5x[i]);
    return s * h;
}

}  // namespace

WeightedGrid WeightedGrid::sphere_model(double N, int n_nodes) {
    if (!(N > 1.0)) throw std::domain_error("sphere_model: requires N > 1");
    if (n_nodes < 16)
        throw std::invalid_argument("sphere_model: requires n_nodes >= 16");
    WeightedGrid g;
    g.kind_ = DomainKind::SphereModel;
    g.model_N_ = N;
    g.nodes_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i)
        g.nodes_[i] = std::numbers::pi * i / (n_nodes - 1);
    const auto pow_sin = [N](double t) {
        const double s = std::sin(t);
        return s <= 0.0 ? 0.0 : std::pow(s, N - 1.0);
    };
    const double c_N = integrate(pow_sin, 0.0, std::numbers::pi);
    g.weight_scale_ = 1.0 / c_N;
    g.weight_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) g.weight_[i] = pow_sin(g.nodes_[i]) / c_N;
    g.cell_mass_.resize(n_nodes - 1);
    double total = 0.0;
    for (int i = 0; i + 1 < n_nodes; ++i) {
        g.cell_mass_[i] =
            gauss5([&](double t) { return pow_sin(t) / c_N; }, g.nodes_[i],
                   g.nodes_[i + 1]);
        total += g.cell_mass_[i];
    }
    g.total_mass_ = total;
    return g;
}

WeightedGrid WeightedGrid::cone_model(double N, double R_max, int n_nodes) {
    if (!(N > 1.0)) throw std::domain_error("cone_model: requires N > 1");
    if (!(R_max > 0.0)) throw std::domain_error("cone_model: requires R_max > 0");
    if (n_nodes < 3)
        throw std::invalid_argument("cone_model: requires n_nodes >= 3");
    WeightedGrid g;
    g.kind_ = DomainKind::ConeModel;
    g.model_N_ = N;
    const double sigma = unit_sphere_volume(N);
    const double omega = unit_ball_volume(N);
    g.weight_scale_ = sigma;
    g.nodes_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) g.nodes_[i] = R_max * i / (n_nodes - 1);
    g.weight_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i)
        g.weight_[i] =
            g.nodes_[i] <= 0.0 ? 0.0 : sigma * std::pow(g.nodes_[i], N - 1.0);
    g.cell_mass_.resize(n_nodes - 1);
    double total = 0.0;
    for (int i = 0; i + 1 < n_nodes; ++i) {
        // Exact primitive; also correct for the integrable singularity of
        // t^{N-1} at 0 when N < 2.
        g.cell_mass_[i] = omega * (std::pow(g.nodes_[i + 1], N) -
                                   std::pow(g.nodes_[i], N));
        total += g.cell_mass_[i];
    }
    g.total_mass_ = total;
    return g;
}

WeightedGrid WeightedGrid::custom(std::vector<double> nodes,
                                  std::vector<double> weights) {
    if (nodes.size() < 3)
        throw std::invalid_argument("custom grid: requires >= 3 nodes");
    if (weights.size() != nodes.size())
        throw std::invalid_argument("custom grid: node/weight size mismatch");
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw std::invalid_argument("custom grid: nodes not increasing");
    for (double w : weights)
        if (!(w >= 0.0))
            throw std::invalid_argument("custom grid: negative weight");
    WeightedGrid g;
    g.kind_ = DomainKind::Custom;
    g.nodes_ = std::move(nodes);
    g.weight_ = std::move(weights);
    g.cell_mass_.resize(g.nodes_.size() - 1);
    double total = 0.0;
    for (size_t i = 0; i + 1 < g.nodes_.size(); ++i) {
        g.cell_mass_[i] = 0.5 * (g.weight_[i] + g.weight_[i + 1]) *
                          (g.nodes_[i + 1] - g.nodes_[i]);
        total += g.cell_mass_[i];
    }
    g.total_mass_ = total;
    return g;
}

WeightedGrid WeightedGrid::with_masses(std::vector<double> nodes,
                                       std::vector<double> weights,
                                       std::vector<double> cell_masses,
                                       DomainKind kind, double model_N) {
    if (nodes.size() < 2 || weights.size() != nodes.size() ||
        cell_masses.size() + 1 != nodes.size())
        throw std::invalid_argument("with_masses: inconsistent array sizes");
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw std::invalid_argument("with_masses: nodes not increasing");
    WeightedGrid g;
    g.kind_ = kind;
    g.model_N_ = model_N;
    g.nodes_ = std::move(nodes);
    g.weight_ = std::move(weights);
    g.cell_mass_ = std::move(cell_masses);
    g.total_mass_ = 0.0;
    for (double m : g.cell_mass_) {
        if (!(m >= 0.0))
            throw std::invalid_argument("with_masses: negative cell mass");
        g.total_mass_ += m;
    }
    if (kind != DomainKind::Custom) {
        // Recover the analytic-weight prefactor from the sampled weights at
        // the node where the model shape is largest.
        size_t imax = 0;
        for (size_t i = 1; i < g.weight_.size(); ++i)
            if (g.weight_[i] > g.weight_[imax]) imax = i;
        const double t = g.nodes_[imax];
        const double shape = kind == DomainKind::SphereModel
                                 ? std::pow(std::sin(t), model_N - 1.0)
                                 : std::pow(t, model_N - 1.0);
        if (shape > 0.0) g.weight_scale_ = g.weight_[imax] / shape;
    }
    return g;
}

double WeightedGrid::measure_interval(double a, double b) const {
    a = std::max(a, nodes_.front());
    b = std::min(b, nodes_.back());
    if (b <= a) return 0.0;
    // Mass of [front, r] as a continuous function of r.
    const auto prefix = [this](double r) {
        if (kind_ == DomainKind::ConeModel)
            return unit_ball_volume(model_N_) * std::pow(r, model_N_);
        if (kind_ == DomainKind::SphereModel) {
            const double N = model_N_;
            const double c_N = integrate(
                [N](double t) { return std::pow(std::sin(t), N - 1.0); }, 0.0,
                std::numbers::pi);
            return integrate(
                       [N](double t) { return std::pow(std::sin(t), N - 1.0); },
                       0.0, r) /
                   c_N;
        }
        // Custom: integral of the linear interpolant of the weight.
        double acc = 0.0;
        for (size_t i = 0; i + 1 < nodes_.size(); ++i) {
            if (r <= nodes_[i]) break;
            if (r >= nodes_[i + 1]) {
                acc += cell_mass_[i];
                continue;
            }
            const double h = nodes_[i + 1] - nodes_[i];
            const double s = r - nodes_[i];
            const double wr =
                weight_[i] + (weight_[i + 1] - weight_[i]) * (s / h);
            acc += 0.5 * (weight_[i] + wr) * s;
            break;
        }
        return acc;
    };
    return prefix(b) - prefix(a);
}

double WeightedGrid::weight_in_cell(int cell, double s) const {
    if (weight_scale_ > 0.0 && kind_ != DomainKind::Custom) {
        const double t =
            nodes_[cell] + (nodes_[cell + 1] - nodes_[cell]) * s;
        if (kind_ == DomainKind::SphereModel) {
            const double st = std::sin(t);
            return st <= 0.0 ? 0.0
                             : weight_scale_ * std::pow(st, model_N_ - 1.0);
        }
        return t <= 0.0 ? 0.0 : weight_scale_ * std::pow(t, model_N_ - 1.0);
    }
    return weight_[cell] + (weight_[cell + 1] - weight_[cell]) * s;
}

WeightedGrid WeightedGrid::normalized() const {
    WeightedGrid g = *this;
    if (!(total_mass_ > 0.0))
        throw std::domain_error("normalized: zero total mass");
    const double s = 1.0 / total_mass_;
    for (double& m : g.cell_mass_) m *= s;
    for (double& w : g.weight_) w *= s;
    g.weight_scale_ *= s;
    g.total_mass_ = 1.0;
    return g;
}

WeightedGrid WeightedGrid::truncated(double r) const {
    if (!(r > nodes_.front()))
        throw std::invalid_argument("truncated: r before domain start");
    WeightedGrid g;
    g.kind_ = kind_;
    g.model_N_ = model_N_;
    g.weight_scale_ = weight_scale_;
    double total = 0.0;
    for (size_t i = 0; i < nodes_.size() && nodes_[i] <= r + 1e-15; ++i) {
        g.nodes_.push_back(nodes_[i]);
        g.weight_.push_back(weight_[i]);
        if (i + 1 < nodes_.size() && nodes_[i + 1] <= r + 1e-15) {
            g.cell_mass_.push_back(cell_mass_[i]);
            total += cell_mass_[i];
        }
    }
    if (g.nodes_.empty() || g.nodes_.back() < r - 1e-15) {
        // r falls strictly inside a cell: append it with interpolated weight.
        const size_t i = g.nodes_.size() - 1;
        const double h = nodes_[i + 1] - nodes_[i];
        const double frac = (r - nodes_[i]) / h;
        g.nodes_.push_back(r);
        g.weight_.push_back(weight_[i] +
                            (weight_[i + 1] - weight_[i]) * frac);
        const double m = measure_interval(nodes_[i], r);
        g.cell_mass_.push_back(m);
        total += m;
    }
    if (g.nodes_.size() < 2)
        throw std::invalid_argument("truncated: degenerate result");
    g.total_mass_ = total;
    return g;
}

SampledFunction::SampledFunction(const WeightedGrid& g, std::vector<double> v)
    : grid(&g), values(std::move(v)) {
    if (values.size() != g.nodes().size())
        throw std::invalid_argument("SampledFunction: size mismatch with grid");
    for (double x : values)
        if (!std::isfinite(x))
            throw std::invalid_argument("SampledFunction: non-finite value");
}

// 5-point Gauss-Legendre rule on [0,1].
const double kGx[5] = {0.046910077030668004, 0.23076534494715845, 0.5,
                       0.7692346550528416, 0.9530899229693319};
const double kGw[5] = {0.11846344252809454, 0.23931433524968324,
                       0.28444444444444444, 0.23931433524968324,
                       0.11846344252809454};

double lp_norm(const SampledFunction& u, double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: requires p >= 1");
    // Per-cell Gauss quadrature of |u|^p for the piecewise-linear
    // interpolant against the in-cell weight (analytic for model grids,
    // linearly interpolated for custom), rescaled so a constant integrand
    // reproduces the exact cell mass. A plain trapezoid rule grossly
    // overestimates |u|^p for grid-scale spikes, and a linear in-cell weight
    // distorts spikes at cells where the model weight vanishes; both matter
    // wherever norms compete against the (exact) Dirichlet energy.
    const auto& m = u.grid->cell_mass();
    double acc = 0.0;
    for (size_t i = 0; i < m.size(); ++i) {
        const double u0 = u.values[i], u1 = u.values[i + 1];
        double num = 0.0, den = 0.0;
        for (int g = 0; g < 5; ++g) {
            const double wt = u.grid->weight_in_cell(int(i), kGx[g]);
            num += kGw[g] * wt *
                   std::pow(std::abs(u0 + (u1 - u0) * kGx[g]), p);
            den += kGw[g] * wt;
        }
        if (den > 0.0) {
            acc += m[i] * num / den;
        } else {
            acc += m[i] * 0.5 * (std::pow(std::abs(u0), p) +
                                 std::pow(std::abs(u1), p));
        }
    }
    return std::pow(acc, 1.0 / p);
}

double integral(const SampledFunction& u) {
    const auto& m = u.grid->cell_mass();
    double acc = 0.0;
    for (size_t i = 0; i < m.size(); ++i)
        acc += m[i] * 0.5 * (u.values[i] + u.values[i + 1]);
    return acc;
}

double mean(const SampledFunction& u) {
    return integral(u) / u.grid->total_mass();
}

double dirichlet_energy(const SampledFunction& u, double p) {
    if (!(p > 1.0)) throw std::domain_error("dirichlet_energy: requires p > 1");
    const auto& x = u.grid->nodes();
    const auto& m = u.grid->cell_mass();
    double acc = 0.0;
    for (size_t i = 0; i < m.size(); ++i) {
        const double slope =
            (u.values[i + 1] - u.values[i]) / (x[i + 1] - x[i]);
        acc += m[i] * std::pow(std::abs(slope), p);
    }
    return acc;
}

namespace {

SampledFunction from_nodes_values(const WeightedGrid& grid,
                                  const std::vector<double>& nodes,
                                  std::vector<double> values) {
    if (nodes.size() != grid.nodes().size())
        throw std::invalid_argument("load_function: node count mismatch");
    for (size_t i = 0; i < nodes.size(); ++i)
        if (std::abs(nodes[i] - grid.nodes()[i]) > 1e-12)
            throw std::invalid_argument("load_function: nodes do not match grid");
    return SampledFunction(grid, std::move(values));
}

}  // namespace

SampledFunction load_function(const WeightedGrid& grid,
                              const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_function: cannot open " + path);
    std::vector<double> nodes, values;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        nlohmann::json j;
        in >> j;
        nodes = j.at("nodes").get<std::vector<double>>();
        values = j.at("values").get<std::vector<double>>();
    } else {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            double a, b;
            char comma;
            if (!(ls >> a >> comma >> b) || comma != ',') {
                // Allow a "node,value" header row.
                if (nodes.empty() && line.find("node") != std::string::npos)
                    continue;
                throw std::invalid_argument("load_function: bad CSV line: " +
                                            line);
            }
            nodes.push_back(a);
            values.push_back(b);
        }
    }
    return from_nodes_values(grid, nodes, std::move(values));
}

void save_function(const SampledFunction& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_function: cannot open " + path);
    const auto& nodes = u.grid->nodes();
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        nlohmann::json j;
        j["nodes"] = nodes;
        j["values"] = u.values;
        out << j.dump(2) << "\n";
    } else {
        out << "node,value\n";
        out.precision(17);
        for (size_t i = 0; i < nodes.size(); ++i)
            out << nodes[i] << "," << u.values[i] << "\n";
    }
}

}  // namespace soblab
