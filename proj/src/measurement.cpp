#include "erps/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "erps/ensemble.hpp"
#include "erps/error.hpp"
#include "erps/estimation.hpp"
#include "erps/log.hpp"
#include "erps/observable.hpp"
#include "erps/polar.hpp"
#include "erps/quantum.hpp"
#include "erps/rng.hpp"

namespace erps {
namespace {

constexpr std::size_t max_dead_zone_retries = 1000;

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

// Adds probability mass to the atom at (a, b), merging numerically equal atoms.
void add_atom(std::vector<MomentumAtom>& atoms, double a, double b, double mass) {
    const auto same = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
    for (auto& atom : atoms) {
        if (same(atom.p_a, a) && same(atom.p_b, b)) {
            atom.probability += mass;
            return;
        }
    }
    atoms.push_back({a, b, mass});
}

struct PointFields {
    double grad_s;
    double grad_log_rho;
};

PointFields gaussian_fields_at(const GaussianSpec& spec, double hbar, double q) {
    const auto grid = Grid1D(512, 20.0 * spec.sigma / 512.0, spec.q0 - 10.0 * spec.sigma + 10.0 * spec.sigma / 512.0,
                             Boundary::periodic);
    const auto fields = polar_decompose(build_state(StateSpec{spec}, grid, hbar));
    return {interpolate_field(fields.grad_s, fields.node_mask, grid, q),
            interpolate_field(fields.grad_log_rho, fields.node_mask, grid, q)};
}

}  // namespace

void MeasurementConfig::validate() const {
    require(hbar > 0.0, "hbar: must be positive");
    require(p0 > 0.0, "p0: must be positive");
    require(pointer.sigma > 0.0, "pointer.sigma: must be positive");
    require(duration_T > 0.0, "duration_T: must be positive");
    require(system_periods >= 1, "system_periods: must be at least 1");
    require(n_a >= Grid1D::min_points && n_b >= Grid1D::min_points, "n_a/n_b: need at least 8 points per axis");
    require(pointer_length > 0.0, "pointer_length: must be positive");
    require(separation_factor >= 6.0, "separation_factor: must be at least 6");
    require(pointer_shift() >= separation_factor * pointer.sigma,
            "coupling_g: g * p0 * duration_T must be at least separation_factor * pointer.sigma");
    require(pointer_shift() + 8.0 * pointer.sigma <= 0.5 * pointer_length,
            "pointer_length: shifted pointer packets do not fit on the pointer axis");
}

Grid2D MeasurementConfig::grid() const {
    const double dq = pointer_length / static_cast<double>(n_b);
    return Grid2D(Grid1D::periodic_for_momentum(p0, hbar, system_periods, n_a),
                  Grid1D(n_b, dq, pointer.q0 - 0.5 * pointer_length + 0.5 * dq, Boundary::periodic));
}

WaveFunction2D apply_impulsive_coupling(const WaveFunction2D& psi, double coupling_g, double duration_T) {
    const auto& g = psi.grid();
    const std::size_t na = g.a().size(), nb = g.b().size();
    auto spec = fft2(psi.amplitudes(), na, nb);
    const auto ka = g.a().wavenumbers(false);
    const auto kb = g.b().wavenumbers(false);
    const double c = coupling_g * psi.hbar() * duration_T;
    for (std::size_t ia = 0; ia < na; ++ia) {
        for (std::size_t ib = 0; ib < nb; ++ib) spec[ia * nb + ib] *= std::polar(1.0, -c * ka[ia] * kb[ib]);
    }
    return WaveFunction2D(g, ifft2(spec, na, nb), psi.hbar());
}

WaveFunction2D entangling_propagate(const WaveFunction& system, const MeasurementConfig& config) {
    config.validate();
    const auto grid = config.grid();
    if (system.grid() != grid.a()) throw PreconditionError("system state is not on the measurement system axis");
    const auto pointer = build_state(StateSpec{config.pointer}, grid.b(), config.hbar);
    std::vector<cplx> amp(grid.size());
    for (std::size_t ia = 0; ia < grid.a().size(); ++ia) {
        for (std::size_t ib = 0; ib < grid.b().size(); ++ib) amp[grid.index(ia, ib)] = system[ia] * pointer[ib];
    }
    auto out = apply_impulsive_coupling(WaveFunction2D(grid, std::move(amp), config.hbar), config.coupling_g,
                                        config.duration_T);

    const auto marginal = out.marginal_b();
    const double peak = *std::max_element(marginal.begin(), marginal.end());
    const std::size_t nb = marginal.size();
    for (std::size_t k = 0; k < boundary_margin_points; ++k) {
        if (std::max(marginal[k], marginal[nb - 1 - k]) > dead_zone_ratio * peak) {
            throw BoundarySupportError("pointer packet reaches the edge of the pointer axis");
        }
    }
    return out;
}

WaveFunction2D entangling_propagate(const MeasurementConfig& config) {
    config.validate();
    return entangling_propagate(build_state(config.system_state, config.grid().a(), config.hbar), config);
}

namespace {

// Pointer marginal and its sampler, shared by all readouts of one entangled state.
class PointerReadout {
public:
    PointerReadout(const WaveFunction2D& entangled, const MeasurementConfig& config)
        : entangled_(entangled),
          config_(config),
          marginal_(entangled.marginal_b()),
          peak_(*std::max_element(marginal_.begin(), marginal_.end())),
          sampler_(entangled.grid().b(), marginal_, std::vector<bool>(marginal_.size(), false)) {}

    MeasurementRecord read(std::uint64_t seed, std::uint64_t run_index) const {
        CounterRng rng(seed, static_cast<std::uint64_t>(RngStream::readout), run_index);
        std::size_t retries = 0;
        CellSampler::Draw draw{};
        for (;;) {
            const double u_cell = rng.uniform();
            draw = sampler_.sample(u_cell, rng.uniform());
            if (marginal_[draw.cell] >= dead_zone_ratio * peak_) break;
            if (++retries > max_dead_zone_retries) {
                throw NumericalError("readout: pointer sample stuck in the dead zone");
            }
            std::ostringstream msg;
            msg << "readout run " << run_index << ": pointer sample " << draw.q << " in the dead zone, retrying";
            warn(msg.str());
        }

        const double direction = config_.pointer_shift() >= 0.0 ? 1.0 : -1.0;
        const double outcome = (draw.q - config_.pointer.q0) * direction > 0.0 ? config_.p0 : -config_.p0;
        auto post = entangled_.slice_at_b(draw.cell).normalized();
        const auto fields = polar_decompose(post);
        const double ep = ms_error_p(fields);
        const bool limited = ms_error_q(fields).grid_limited;
        return {outcome, draw.q, draw.cell, std::move(post), ep, limited, retries};
    }

private:
    const WaveFunction2D& entangled_;
    const MeasurementConfig& config_;
    std::vector<double> marginal_;
    double peak_;
    CellSampler sampler_;
};

}  // namespace

MeasurementRecord readout_and_collapse(const WaveFunction2D& entangled, const MeasurementConfig& config,
                                       std::uint64_t seed, std::uint64_t run_index) {
    return PointerReadout(entangled, config).read(seed, run_index);
}

OutcomeCounts repeated_readouts(const WaveFunction& system, const MeasurementConfig& config, std::size_t n_runs,
                                std::uint64_t seed, bool keep_records) {
    const auto entangled = entangling_propagate(system, config);
    const PointerReadout readout(entangled, config);
    const auto momentum = Observable::momentum();
    OutcomeCounts c;
    c.n_runs = n_runs;
    for (std::size_t r = 0; r < n_runs; ++r) {
        auto rec = readout.read(seed, r);
        (rec.outcome > 0.0 ? c.n_plus : c.n_minus) += 1;
        c.max_post_ms_error_p = std::max(c.max_post_ms_error_p, rec.post_ms_error_p);
        const double mean_p = quantum_expectation(rec.post_state, momentum);
        c.max_post_momentum_deviation =
            std::max(c.max_post_momentum_deviation, std::abs(mean_p - rec.outcome) / config.p0);
        if (keep_records) c.records.push_back(std::move(rec));
    }
    return c;
}

RepeatabilityReport repeatability_check(const MeasurementRecord& record, const MeasurementConfig& config,
                                        std::uint64_t seed, std::size_t n_trials) {
    const auto counts = repeated_readouts(record.post_state, config, n_trials, seed);
    const std::size_t same = record.outcome > 0.0 ? counts.n_plus : counts.n_minus;
    return {record.outcome, n_trials, same, same == n_trials};
}

BornReport born_statistics(const StateSpec& system, const MeasurementConfig& config, std::size_t n_runs,
                           std::uint64_t seed) {
    if (n_runs == 0) throw PreconditionError("born_statistics: n_runs must be positive");
    const auto grid = config.grid();
    const auto psi = build_state(system, grid.a(), config.hbar);

    cplx c_plus{}, c_minus{};
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double phase = config.p0 * grid.a().coordinate(i) / config.hbar;
        c_plus += std::polar(1.0, -phase) * psi[i];
        c_minus += std::polar(1.0, phase) * psi[i];
    }
    const double dq = grid.a().spacing(), length = grid.a().extent();
    const double prob_plus = std::norm(c_plus * dq) / length;
    const double prob_minus = std::norm(c_minus * dq) / length;

    const auto counts = repeated_readouts(psi, config, n_runs, seed);
    BornReport r{};
    r.n_runs = n_runs;
    r.n_plus = counts.n_plus;
    r.n_minus = counts.n_minus;
    r.freq_plus = static_cast<double>(counts.n_plus) / static_cast<double>(n_runs);
    r.outside_mass = std::max(0.0, 1.0 - prob_plus - prob_minus);
    r.expected_plus = prob_plus / (prob_plus + prob_minus);
    r.std_error = std::sqrt(r.expected_plus * (1.0 - r.expected_plus) / static_cast<double>(n_runs));
    const double dev = std::abs(r.freq_plus - r.expected_plus);
    if (r.std_error > 1e-12) {
        r.z_score = dev / r.std_error;
        r.pass = r.z_score <= 4.0;
    } else {
        r.z_score = 0.0;
        r.pass = dev <= 1e-12;
    }
    const double n = static_cast<double>(n_runs);
    for (const auto& [observed, p] : {std::pair{static_cast<double>(r.n_plus), r.expected_plus},
                                      std::pair{static_cast<double>(r.n_minus), 1.0 - r.expected_plus}}) {
        if (p * n > 0.0) r.chi_square += (observed - p * n) * (observed - p * n) / (p * n);
    }
    return r;
}

const char* to_string(XiCorrelation m) noexcept {
    return m == XiCorrelation::global_xi ? "global_xi" : "separable_xi";
}

PrepIndependenceReport preparation_independence_diagnostic(const GaussianSpec& state_a, const GaussianSpec& state_b,
                                                           const XiModel& xi_model, XiCorrelation mode, double q_a,
                                                           double q_b) {
    if (!xi_model.discrete()) {
        throw PreconditionError("preparation_independence_diagnostic needs a discrete xi model");
    }
    const double hbar = xi_model.hbar();
    const auto fa = gaussian_fields_at(state_a, hbar, q_a);
    const auto fb = gaussian_fields_at(state_b, hbar, q_b);

    PrepIndependenceReport r{mode, q_a, q_b, false, {}, {}, {}, 0.0};
    if (std::abs(fa.grad_log_rho) <= 1e-9 / state_a.sigma) {
        r.degenerate = true;
        r.degenerate_reason = "density gradient of system A vanishes at q_a";
    } else if (std::abs(fb.grad_log_rho) <= 1e-9 / state_b.sigma) {
        r.degenerate = true;
        r.degenerate_reason = "density gradient of system B vanishes at q_b";
    }

    const auto& atoms = xi_model.atoms();
    const auto& weights = xi_model.weights();
    const auto pa = [&](double xi) { return fa.grad_s + 0.5 * xi * fa.grad_log_rho; };
    const auto pb = [&](double xi) { return fb.grad_s + 0.5 * xi * fb.grad_log_rho; };
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (mode == XiCorrelation::global_xi) {
            add_atom(r.joint, pa(atoms[k]), pb(atoms[k]), weights[k]);
        } else {
            for (std::size_t l = 0; l < atoms.size(); ++l) {
                add_atom(r.joint, pa(atoms[k]), pb(atoms[l]), weights[k] * weights[l]);
            }
        }
    }

    std::vector<MomentumAtom> marg_a, marg_b;  // p_b (resp. p_a) unused, set to 0
    for (const auto& atom : r.joint) {
        add_atom(marg_a, atom.p_a, 0.0, atom.probability);
        add_atom(marg_b, 0.0, atom.p_b, atom.probability);
    }
    for (const auto& a : marg_a) {
        for (const auto& b : marg_b) r.product.push_back({a.p_a, b.p_b, a.probability * b.probability});
    }

    // Every joint atom appears in the product support, so the sum over the product covers both.
    double tv = 0.0;
    for (const auto& prod : r.product) {
        double joint = 0.0;
        for (const auto& atom : r.joint) {
            if (atom.p_a == prod.p_a && atom.p_b == prod.p_b) joint = atom.probability;
        }
        tv += std::abs(joint - prod.probability);
    }
    r.tv_distance = 0.5 * tv;
    return r;
}

void write_measurement_log_csv(std::ostream& os, const std::vector<MeasurementRecord>& records) {
    os << "run_id,pointer_reading,outcome,post_ms_error_p\n" << std::setprecision(17);
    for (std::size_t i = 0; i < records.size(); ++i) {
        os << i << ',' << records[i].pointer_reading << ',' << records[i].outcome << ','
           << records[i].post_ms_error_p << '\n';
    }
}

}  // namespace erps
