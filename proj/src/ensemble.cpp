#include "erps/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "erps/error.hpp"
#include "erps/quantum.hpp"

namespace erps {

double interpolate_field(std::span<const double> field, const std::vector<bool>& mask, const Grid1D& grid,
                         double q) {
    if (!grid.contains(q)) throw PreconditionError("field query outside the grid extent");
    const std::size_t n = grid.size();
    const double u = (q - grid.origin()) / grid.spacing();
    const long nearest = std::lround(u);
    const auto wrap = [&](long i) -> std::size_t {
        if (grid.periodic()) return static_cast<std::size_t>(((i % static_cast<long>(n)) + static_cast<long>(n)) %
                                                             static_cast<long>(n));
        return static_cast<std::size_t>(std::clamp(i, 0L, static_cast<long>(n) - 1));
    };
    const std::size_t inear = wrap(nearest);
    if (mask[inear]) throw NodeQueryError("field queried at a masked node");

    const long lo = static_cast<long>(std::floor(u));
    const double t = u - static_cast<double>(lo);
    const std::size_t i0 = wrap(lo), i1 = wrap(lo + 1);
    if (!grid.periodic() && (lo < 0 || lo + 1 >= static_cast<long>(n))) return field[inear];
    if (mask[i0] || mask[i1]) return field[inear];
    return (1.0 - t) * field[i0] + t * field[i1];
}

double momentum_field(const PolarFields& fields, double xi, double q) {
    return interpolate_field(fields.grad_s, fields.node_mask, fields.grid, q) +
           0.5 * xi * interpolate_field(fields.grad_log_rho, fields.node_mask, fields.grid, q);
}

EstimateField estimate_field(const PolarFields& fields) {
    return {fields.grid, fields.grad_s, fields.grad_log_rho, fields.node_mask};
}

CellSampler::CellSampler(const Grid1D& grid, std::span<const double> density, const std::vector<bool>& mask)
    : grid_(grid), cumulative_(grid.size()) {
    if (density.size() != grid.size() || mask.size() != grid.size()) {
        throw PreconditionError("CellSampler: density and mask must match the grid");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        if (!mask[i]) acc += std::max(0.0, density[i]) * grid.spacing();
        cumulative_[i] = acc;
    }
    if (!(acc > 0.0)) throw NumericalError("CellSampler: no sampling mass outside masked nodes");
}

CellSampler::Draw CellSampler::sample(double u_cell, double u_offset) const {
    const double target = u_cell * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) --it;
    const auto cell = static_cast<std::size_t>(it - cumulative_.begin());
    return {cell, grid_.coordinate(cell) + (u_offset - 0.5) * grid_.spacing()};
}

PhaseSpaceEnsemble sample_ensemble(const PolarFields& fields, const XiModel& xi_model, std::size_t n,
                                   std::uint64_t seed, unsigned workers, std::string source_state) {
    if (n == 0) throw PreconditionError("sample_ensemble: n must be at least 1");
    const CellSampler sampler(fields.grid, fields.rho, fields.node_mask);

    PhaseSpaceEnsemble ens{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                           std::move(source_state), seed};
    const auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CounterRng rng(seed, static_cast<std::uint64_t>(RngStream::ensemble), i);
            const double u_cell = rng.uniform();
            const double u_offset = rng.uniform();
            const auto draw = sampler.sample(u_cell, u_offset);
            const double xi = xi_model.sample(rng);
            ens.q[i] = draw.q;
            ens.xi[i] = xi;
            ens.p[i] = momentum_field(fields, xi, draw.q);
        }
    };

    workers = std::clamp(workers, 1u, 64u);
    if (workers == 1 || n < 4096) {
        fill(0, n);
        return ens;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
        if (begin < end) pool.emplace_back(fill, begin, end);
    }
    return ens;
}

MeanWithError ensemble_average(const PhaseSpaceEnsemble& ens, const Observable& obs) {
    const std::size_t n = ens.size();
    if (n == 0) throw PreconditionError("ensemble_average: empty ensemble");
    std::vector<double> values(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = obs.classical(ens.q[i], ens.p[i]);
        sum += values[i];
    }
    const double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

OpticalEquivalenceReport compare_with_quantum(const PhaseSpaceEnsemble& ens, const WaveFunction& psi,
                                              const Observable& obs) {
    const auto mc = ensemble_average(ens, obs);
    const double qv = quantum_expectation(psi, obs);
    const double se = std::max(mc.std_error, 1e-12 * std::max(1.0, std::abs(qv)));
    const double z = std::abs(mc.mean - qv) / se;
    return {obs.name, mc.mean, mc.std_error, qv, z, z < optical_equivalence_z_limit};
}

OpticalEquivalenceReport optical_equivalence_check(const StateSpec& spec, const Grid1D& grid, double hbar,
                                                   const Observable& obs, const XiModel& xi_model, std::size_t n,
                                                   std::uint64_t seed) {
    const auto psi = build_state(spec, grid, hbar);
    const auto fields = polar_decompose(psi);
    const auto ens = sample_ensemble(fields, xi_model, n, seed, 1, describe(spec));
    return compare_with_quantum(ens, psi, obs);
}

double histogram_tv(std::span<const double> samples, const Grid1D& grid, std::span<const double> density,
                    std::size_t cells_per_bin) {
    if (density.size() != grid.size()) throw PreconditionError("histogram_tv: density does not match the grid");
    if (cells_per_bin == 0) throw PreconditionError("histogram_tv: cells_per_bin must be positive");
    const std::size_t n_bins = (grid.size() + cells_per_bin - 1) / cells_per_bin;
    std::vector<double> expected(n_bins, 0.0), observed(n_bins, 0.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        expected[i / cells_per_bin] += density[i];
        mass += density[i];
    }
    std::size_t count = 0;
    for (const double q : samples) {
        if (!std::isfinite(q) || !grid.contains(q)) continue;
        const auto cell = std::min(grid.size() - 1,
                                   static_cast<std::size_t>((q - grid.lower_edge()) / grid.spacing()));
        observed[cell / cells_per_bin] += 1.0;
        ++count;
    }
    if (count == 0) throw PreconditionError("histogram_tv: no finite samples inside the grid");
    double tv = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        tv += std::abs(observed[b] / static_cast<double>(count) - expected[b] / mass);
    }
    return 0.5 * tv;
}

void write_ensemble_csv(std::ostream& os, const PhaseSpaceEnsemble& ens, std::size_t max_rows) {
    const std::size_t rows = (max_rows == 0) ? ens.size() : std::min(max_rows, ens.size());
    const auto old_precision = os.precision(17);
    os << "q,p,xi\n";
    for (std::size_t i = 0; i < rows; ++i) os << ens.q[i] << ',' << ens.p[i] << ',' << ens.xi[i] << '\n';
    os.precision(old_precision);
}

}  // namespace erps
