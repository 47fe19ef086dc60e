#pragma once

#include <string>
#include <vector>

// Discretized weighted intervals: the computational stand-in for a
// one-dimensional metric measure space (interval metric, measure h(t) dt).

namespace soblab {

enum class DomainKind { SphereModel, ConeModel, Custom };

class WeightedGrid {
  public:
    /// Uniform grid on [0,pi] with normalized weight sin^{N-1}(t)/c_N,
    /// c_N = int_0^pi sin^{N-1}; total mass 1 within 1e-10.
    static WeightedGrid sphere_model(double N, int n_nodes);

    /// Uniform grid on [0,R_max] with weight sigma_{N-1} t^{N-1};
    /// cell masses are the exact increments omega_N (x_{i+1}^N - x_i^N).
    static WeightedGrid cone_model(double N, double R_max, int n_nodes);

    /// Custom grid from strictly increasing nodes and non-negative weight
    /// samples; cell masses by trapezoid rule on the sampled density.
    static WeightedGrid custom(std::vector<double> nodes,
                               std::vector<double> weights);

    /// Fully explicit construction (nodes, weights, and per-cell masses
    /// already computed by the caller, e.g. by exact primitives).
    static WeightedGrid with_masses(std::vector<double> nodes,
                                    std::vector<double> weights,
                                    std::vector<double> cell_masses,
                                    DomainKind kind, double model_N);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weight_at_node() const { return weight_; }
    const std::vector<double>& cell_mass() const { return cell_mass_; }
    int n_nodes() const { return static_cast<int>(nodes_.size()); }
    double total_mass() const { return total_mass_; }
    double diameter() const { return nodes_.back() - nodes_.front(); }
    DomainKind kind() const { return kind_; }
    /// Dimension parameter for model grids; 0 for Custom.
    double model_N() const { return model_N_; }

    /// Measure of (a, b) intersected with the domain. Exact for model
    /// weights, linear-interpolant quadrature for Custom.
    double measure_interval(double a, double b) const;

    /// Weight density at relative position s in [0,1] within cell `cell`:
    /// the analytic model weight for model grids (so quadrature inside a
    /// cell sees the true vanishing rate at the endpoints), linear
    /// interpolation of the node samples for Custom grids.
    double weight_in_cell(int cell, double s) const;

    /// Returns a copy with cell masses (and weights) scaled so the total
    /// mass is 1.
    WeightedGrid normalized() const;

    /// Restriction to [nodes.front(), r]: keeps every node <= r and appends
    /// r itself as the last node when it falls inside a cell.
    WeightedGrid truncated(double r) const;

  private:
    WeightedGrid() = default;
    std::vector<double> nodes_;
    std::vector<double> weight_;
    std::vector<double> cell_mass_;
    double total_mass_ = 0.0;
    DomainKind kind_ = DomainKind::Custom;
    double model_N_ = 0.0;
    // Prefactor of the analytic model weight (0 for Custom): the weight is
    // weight_scale_ * sin^{N-1}(t) or weight_scale_ * t^{N-1}.
    double weight_scale_ = 0.0;
};

struct SampledFunction {
    const WeightedGrid* grid = nullptr;
    std::vector<double> values;

    SampledFunction() = default;
    SampledFunction(const WeightedGrid& g, std::vector<double> v);

    /// Builds by evaluating f at every node.
    template <class F>
    static SampledFunction from(const WeightedGrid& g, F&& f) {
        std::vector<double> v(g.nodes().size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = f(g.nodes()[i]);
        return SampledFunction(g, std::move(v));
    }
};

/// (sum over cells of trapezoid-interpolated |u|^p times cell mass)^{1/p}.
double lp_norm(const SampledFunction& u, double p);

/// Integral of u against the grid measure (trapezoid per cell).
double integral(const SampledFunction& u);

/// Mean of u against the grid measure.
double mean(const SampledFunction& u);

/// sum over cells of |du/dx|^p * cell_mass (forward differences).
double dirichlet_energy(const SampledFunction& u, double p);

/// Reads `node,value` CSV or {"nodes": [...], "values": [...]} JSON; the
/// nodes must match the grid to 1e-12.
SampledFunction load_function(const WeightedGrid& grid, const std::string& path);

/// Writes a SampledFunction in the same two formats, chosen by extension
/// (.json -> JSON, anything else -> CSV).
void save_function(const SampledFunction& u, const std::string& path);

}  // namespace soblab
