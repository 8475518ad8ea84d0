#include "erps/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "erps/ensemble.hpp"
#include "erps/error.hpp"
#include "erps/estimation.hpp"
#include "erps/log.hpp"
#include "erps/polar.hpp"
#include "erps/quantum.hpp"
#include "erps/rng.hpp"

namespace erps {
namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

bool all_finite(const std::vector<cplx>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool has_interior_node(const std::vector<bool>& mask) {
    const auto first = std::find(mask.begin(), mask.end(), false);
    if (first == mask.end()) return false;
    const auto last = std::find(mask.rbegin(), mask.rend(), false).base();
    return std::find(first, last, true) != last;
}

}  // namespace

HamiltonianSpec HamiltonianSpec::free(double mass) { return {mass, {}, 0.0}; }

HamiltonianSpec HamiltonianSpec::harmonic(const Grid1D& grid, double mass, double omega, double center) {
    HamiltonianSpec h{mass, std::vector<double>(grid.size()), 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid.coordinate(i) - center;
        h.potential[i] = 0.5 * mass * omega * omega * d * d;
    }
    return h;
}

void HamiltonianSpec::validate(const Grid1D& grid) const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw PreconditionError("Hamiltonian mass must be positive");
    if (!potential.empty() && potential.size() != grid.size()) {
        throw PreconditionError("Hamiltonian potential does not match the grid");
    }
    if (!std::all_of(potential.begin(), potential.end(), [](double v) { return std::isfinite(v); })) {
        throw PreconditionError("Hamiltonian potential has non-finite entries");
    }
}

double step_size_guideline(const Grid1D& grid, double mass, double hbar) {
    return 10.0 * mass * grid.spacing() * grid.spacing() / hbar;
}

SplitStepPropagator::SplitStepPropagator(const Grid1D& grid, const HamiltonianSpec& ham, double hbar, double dt)
    : half_potential_(grid.size(), cplx(1.0, 0.0)), kinetic_(grid.size()), dt_(dt) {
    ham.validate(grid);
    if (!std::isfinite(dt) || dt == 0.0) throw PreconditionError("propagation step must be finite and non-zero");
    if (std::abs(dt) > step_size_guideline(grid, ham.mass, hbar)) {
        std::ostringstream msg;
        msg << "time step " << dt << " exceeds 10 m dq^2 / hbar = " << step_size_guideline(grid, ham.mass, hbar);
        warn(msg.str());
    }
    if (!grid.periodic()) warn("split-step propagation on a truncated grid wraps at the edges (no absorbing layer)");
    for (std::size_t i = 0; i < ham.potential.size(); ++i) {
        half_potential_[i] = std::polar(1.0, -0.5 * ham.potential[i] * dt / hbar);
    }
    const auto k = grid.wavenumbers(false);
    for (std::size_t j = 0; j < k.size(); ++j) {
        kinetic_[j] = std::polar(1.0, -hbar * k[j] * k[j] * dt / (2.0 * ham.mass));
    }
}

void SplitStepPropagator::step(std::vector<cplx>& amp) const {
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] *= half_potential_[i];
    auto spec = fft(amp);
    for (std::size_t j = 0; j < spec.size(); ++j) spec[j] *= kinetic_[j];
    amp = ifft(spec);
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] *= half_potential_[i];
}

WaveFunction propagate(const WaveFunction& psi, const HamiltonianSpec& ham, double dt, std::size_t n_steps) {
    const SplitStepPropagator prop(psi.grid(), ham, psi.hbar(), dt);
    std::vector<cplx> amp(psi.amplitudes().begin(), psi.amplitudes().end());
    for (std::size_t s = 0; s < n_steps; ++s) prop.step(amp);
    if (!all_finite(amp)) throw NumericalError("propagate: amplitudes became non-finite");
    return WaveFunction(psi.grid(), std::move(amp), psi.hbar());
}

std::vector<WaveFunction> propagate_snapshots(const WaveFunction& psi, const HamiltonianSpec& ham, double dt,
                                              std::size_t n_steps, std::size_t every) {
    if (every == 0) throw PreconditionError("propagate_snapshots: every must be positive");
    const SplitStepPropagator prop(psi.grid(), ham, psi.hbar(), dt);
    std::vector<cplx> amp(psi.amplitudes().begin(), psi.amplitudes().end());
    std::vector<WaveFunction> out{psi};
    for (std::size_t s = 1; s <= n_steps; ++s) {
        prop.step(amp);
        if (s % every == 0) {
            if (!all_finite(amp)) throw NumericalError("propagate: amplitudes became non-finite");
            out.emplace_back(psi.grid(), amp, psi.hbar());
        }
    }
    return out;
}

double average_energy(const WaveFunction& psi, const HamiltonianSpec& ham) {
    ham.validate(psi.grid());
    const auto p_psi = apply_momentum(psi);
    double kinetic = 0.0, potential = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        kinetic += std::norm(p_psi[i]);
        if (!ham.potential.empty()) potential += ham.potential[i] * std::norm(psi[i]);
    }
    const double dq = psi.grid().spacing();
    return (kinetic / (2.0 * ham.mass) + potential) * dq;
}

ContinuityReport continuity_residual(std::span<const WaveFunction> snapshots, double mass, double dt,
                                     std::optional<DiffScheme> scheme) {
    if (snapshots.size() < 3) throw PreconditionError("continuity_residual needs at least 3 snapshots");
    if (!(mass > 0.0) || !(dt > 0.0)) throw PreconditionError("continuity_residual: mass and dt must be positive");
    const Grid1D& grid = snapshots.front().grid();
    const DiffScheme sch = scheme.value_or(default_scheme(grid));
    const double hbar = snapshots.front().hbar();

    ContinuityReport rep{{}, {}, 0.0, false};
    for (const auto& s : snapshots) {
        if (s.grid() != grid) throw PreconditionError("continuity_residual: snapshots on different grids");
        const double peak = s.peak_density();
        std::vector<bool> mask(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) mask[i] = std::norm(s[i]) < 1e-12 * peak;
        rep.node_flag = rep.node_flag || has_interior_node(mask);
    }

    for (std::size_t k = 1; k + 1 < snapshots.size(); ++k) {
        const auto& cur = snapshots[k];
        const auto dpsi = derivative(cur.amplitudes(), grid, sch);
        std::vector<double> flux(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            flux[i] = hbar * (std::conj(cur[i]) * dpsi[i]).imag() / mass;
        }
        const auto dflux = derivative(std::span<const double>(flux), grid, sch);
        std::vector<double> r(grid.size());
        double l2 = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double drho = (std::norm(snapshots[k + 1][i]) - std::norm(snapshots[k - 1][i])) / (2.0 * dt);
            r[i] = drho + dflux[i];
            l2 += r[i] * r[i];
        }
        l2 = std::sqrt(l2 * grid.spacing());
        rep.max_l2 = std::max(rep.max_l2, l2);
        rep.l2_norms.push_back(l2);
        rep.residuals.push_back(std::move(r));
    }
    return rep;
}

std::vector<double> TrajectoryBundle::column(std::size_t record) const {
    std::vector<double> c(n_traj);
    for (std::size_t t = 0; t < n_traj; ++t) c[t] = at(t, record);
    return c;
}

TrajectoryBundle integrate_trajectories(const WaveFunction& psi0, const HamiltonianSpec& ham, double dt,
                                        std::size_t n_steps, std::size_t n_traj, std::uint64_t seed,
                                        const TrajectoryOptions& options) {
    if (n_traj == 0) throw PreconditionError("integrate_trajectories: n_traj must be positive");
    if (options.record_every == 0) throw PreconditionError("integrate_trajectories: record_every must be positive");
    const Grid1D& grid = psi0.grid();
    const SplitStepPropagator prop(grid, ham, psi0.hbar(), dt);
    const double m = ham.mass;

    std::vector<std::size_t> record_steps;
    for (std::size_t s = 0; s <= n_steps; s += options.record_every) record_steps.push_back(s);
    if (record_steps.back() != n_steps) record_steps.push_back(n_steps);

    TrajectoryBundle b;
    b.n_traj = n_traj;
    for (const auto s : record_steps) b.times.push_back(static_cast<double>(s) * dt);
    b.positions.assign(n_traj * b.times.size(), nan);

    auto fields = polar_decompose(psi0);
    std::vector<double> q(n_traj);
    std::vector<bool> alive(n_traj, true);
    {
        const CellSampler sampler(grid, fields.rho, fields.node_mask);
        for (std::size_t t = 0; t < n_traj; ++t) {
            CounterRng rng(seed, static_cast<std::uint64_t>(RngStream::trajectories), t);
            const double u_cell = rng.uniform();
            q[t] = sampler.sample(u_cell, rng.uniform()).q;
            b.positions[t * b.times.size()] = q[t];
        }
    }

    const auto velocity = [&](const PolarFields& f, double x) {
        return interpolate_field(f.grad_s, f.node_mask, grid, x) / m;
    };
    const auto place = [&](double x) { return grid.periodic() ? grid.wrap(x) : x; };

    std::vector<cplx> amp(psi0.amplitudes().begin(), psi0.amplitudes().end());
    std::size_t next_record = 1;
    for (std::size_t s = 0; s < n_steps; ++s) {
        prop.step(amp);
        if (!all_finite(amp)) throw NumericalError("integrate_trajectories: amplitudes became non-finite");
        auto next = polar_decompose(WaveFunction(grid, amp, psi0.hbar()));
        for (std::size_t t = 0; t < n_traj; ++t) {
            if (!alive[t]) continue;
            try {
                const double qh = place(q[t] + 0.5 * dt * velocity(fields, q[t]));
                const double vh = 0.5 * (velocity(fields, qh) + velocity(next, qh));
                q[t] = place(q[t] + dt * vh);
                if (!grid.contains(q[t])) throw PreconditionError("trajectory left the grid");
            } catch (const PreconditionError&) {
                alive[t] = false;
            } catch (const NodeQueryError&) {
                alive[t] = false;
            }
            if (!alive[t]) {
                b.stopped.emplace_back(t, s);
                q[t] = nan;
            }
        }
        fields = std::move(next);
        if (next_record < record_steps.size() && record_steps[next_record] == s + 1) {
            for (std::size_t t = 0; t < n_traj; ++t) b.positions[t * b.times.size() + next_record] = q[t];
            ++next_record;
        }
    }
    if (!b.stopped.empty()) {
        warn(std::to_string(b.stopped.size()) + " trajectories stopped at masked nodes or the grid edge");
    }
    return b;
}

const char* to_string(ClassicalLimitStatus s) noexcept {
    switch (s) {
        case ClassicalLimitStatus::scaling: return "scaling";
        case ClassicalLimitStatus::exactly_classical: return "exactly_classical";
        case ClassicalLimitStatus::undefined_ratio: return "undefined_ratio";
    }
    return "unknown";
}

ClassicalLimitReport classical_limit_scan(const StateSpec& spec, const Grid1D& grid,
                                          std::span<const double> hbar_values) {
    if (hbar_values.size() < 2) throw PreconditionError("classical_limit_scan needs at least two hbar values");
    ClassicalLimitReport r;
    bool any_error = false, all_flow = true;
    for (const double h : hbar_values) {
        if (!(h > 0.0)) throw PreconditionError("classical_limit_scan: hbar values must be positive");
        const auto psi = build_state(spec, grid, h);
        const auto f = polar_decompose(psi);
        double flow = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!f.node_mask[i]) flow += f.grad_s[i] * f.grad_s[i] * f.rho[i];
        }
        const double rms_flow = std::sqrt(flow * grid.spacing());
        const double rms_err = std::sqrt(ms_error_p(f));
        r.hbar_values.push_back(h);
        r.rms_error.push_back(rms_err);
        r.rms_grad_s.push_back(rms_flow);
        // Relative cut-offs: roundoff leaves ~1e-15 residue in fields that vanish analytically.
        any_error = any_error || rms_err > 1e-10 * std::max(rms_flow, h);
        all_flow = all_flow && rms_flow > 1e-10 * std::max(rms_err, h);
    }
    if (!all_flow) {
        r.status = ClassicalLimitStatus::undefined_ratio;
        return r;
    }
    if (!any_error) {
        r.status = ClassicalLimitStatus::exactly_classical;
        return r;
    }
    r.status = ClassicalLimitStatus::scaling;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < r.hbar_values.size(); ++i) {
        r.ratios.push_back(r.rms_error[i] / r.rms_grad_s[i]);
        const double x = std::log(r.hbar_values[i]), y = std::log(r.ratios.back());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(r.hbar_values.size());
    r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return r;
}

void write_snapshots_csv(std::ostream& os, std::span<const WaveFunction> snapshots, std::span<const double> times) {
    if (snapshots.size() != times.size()) throw PreconditionError("write_snapshots_csv: one time per snapshot");
    os << "t,q,re,im,rho,S\n" << std::setprecision(17);
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const auto f = polar_decompose(snapshots[k]);
        const auto& g = snapshots[k].grid();
        for (std::size_t i = 0; i < g.size(); ++i) {
            os << times[k] << ',' << g.coordinate(i) << ',' << snapshots[k][i].real() << ',' << snapshots[k][i].imag()
               << ',' << f.rho[i] << ',' << f.s_action[i] << '\n';
        }
    }
}

void write_trajectories_csv(std::ostream& os, const TrajectoryBundle& bundle) {
    os << "traj_id,t,q\n" << std::setprecision(17);
    for (std::size_t t = 0; t < bundle.n_traj; ++t) {
        for (std::size_t k = 0; k < bundle.times.size(); ++k) {
            const double x = bundle.at(t, k);
            if (!std::isfinite(x)) break;
            os << t << ',' << bundle.times[k] << ',' << x << '\n';
        }
    }
}

}  // namespace erps
