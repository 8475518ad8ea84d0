// Schroedinger evolution, continuity and Bohmian trajectory checks.

#include <cmath>
#include <numbers>

#include "erps/dynamics.hpp"
#include "erps/ensemble.hpp"
#include "erps/polar.hpp"
#include "experiments.hpp"

namespace erps::runner {
namespace {

struct DynamicsParams {
    Grid1D grid;
    double mass;
    double omega;
    GaussianSpec free_packet;
    double free_time;
    double free_dt;
    double coherent_q0;
    double energy_dt;
    std::size_t energy_steps;
    double centre_dt;
    double centre_time;
    std::size_t continuity_points;
    double continuity_length;
    double continuity_dt;
    std::size_t n_traj;
    double traj_dt;
    std::size_t traj_steps;
    std::size_t cells_per_bin;
};

double mean_position(const WaveFunction& psi) {
    double m = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) m += psi.grid().coordinate(i) * std::norm(psi[i]);
    return m * psi.grid().spacing();
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

}  // namespace

ExperimentBody parse_dynamics(const Section& root, const Common& common) {
    root.allow_only(with_common_keys(
        {"grid", "mass", "omega", "free_packet", "coherent", "continuity", "trajectories"}));
    auto grid = parse_grid(root.child("grid"), common.hbar);
    const double mass = root.number("mass", 1.0);
    const double omega = root.number("omega", 1.0);
    if (!(mass > 0.0)) root.error("mass", "must be positive");
    if (!(omega > 0.0)) root.error("omega", "must be positive");

    const auto fp = root.child("free_packet");
    fp.allow_only({"packet", "t_final", "dt"});
    const auto packet = parse_gaussian(fp.child("packet"));
    const double free_time = fp.number("t_final", 4.0);
    const double free_dt = fp.number("dt", 0.01);

    const auto co = root.child("coherent");
    co.allow_only({"q0", "energy_dt", "energy_steps", "centre_dt", "centre_time"});
    const double q0 = co.number("q0", 3.0);
    const double energy_dt = co.number("energy_dt", 1e-4);
    const auto energy_steps = co.unsigned_integer("energy_steps", 1000);
    const double centre_dt = co.number("centre_dt", 1e-3);
    const double centre_time = co.number("centre_time", 1.571);

    const auto ct = root.child("continuity");
    ct.allow_only({"base_points", "length", "dt"});
    const auto cpoints = ct.unsigned_integer("base_points", 256);
    const double clength = ct.number("length", 40.0);
    const double cdt = ct.number("dt", 0.02);

    const auto tr = root.child("trajectories");
    tr.allow_only({"n", "dt", "steps", "cells_per_bin"});
    const auto n_traj = tr.unsigned_integer("n", 100000);
    const double traj_dt = tr.number("dt", 0.01);
    const auto traj_steps = tr.unsigned_integer("steps", 300);
    const auto cells = tr.unsigned_integer("cells_per_bin", 8);

    for (const auto& [sec, key, v] : {std::tuple{&fp, "dt", free_dt}, std::tuple{&fp, "t_final", free_time},
                                      std::tuple{&co, "energy_dt", energy_dt}, std::tuple{&co, "centre_dt", centre_dt},
                                      std::tuple{&co, "centre_time", centre_time}, std::tuple{&ct, "length", clength},
                                      std::tuple{&ct, "dt", cdt}, std::tuple{&tr, "dt", traj_dt}}) {
        if (!(v > 0.0)) sec->error(key, "must be positive");
    }
    if (cpoints < Grid1D::min_points) ct.error("base_points", "too few points");
    if (n_traj == 0) tr.error("n", "must be positive");
    if (cells == 0) tr.error("cells_per_bin", "must be positive");
    if (energy_steps == 0) co.error("energy_steps", "must be positive");
    if (root.failed() || !grid || !packet) return {};

    const DynamicsParams p{*grid,     mass,     omega,       *packet,    free_time, free_dt, q0,
                           energy_dt, energy_steps, centre_dt, centre_time, cpoints, clength, cdt,
                           n_traj,    traj_dt,  traj_steps,  cells};

    return [p](RunContext& ctx) {
        const double hbar = ctx.hbar();
        const auto free = HamiltonianSpec::free(p.mass);
        const auto harm = HamiltonianSpec::harmonic(p.grid, p.mass, p.omega);
        // Coherent state of the oscillator displaced to q0.
        const double sigma0 = std::sqrt(hbar / (2.0 * p.mass * p.omega));
        const auto coherent = build_state(StateSpec::gaussian(p.coherent_q0, sigma0, 0.0), p.grid, hbar);

        ctx.guard("dynamics/unitarity", 9, [&] {
            const auto out = propagate(coherent, harm, p.energy_dt, p.energy_steps);
            const double per_step = std::abs(out.norm() - 1.0) / static_cast<double>(p.energy_steps);
            ctx.at_most("dynamics/norm_drift_per_step", 9, per_step, 1e-12);
            const double e0 = average_energy(coherent, harm);
            const double drift = std::abs(average_energy(out, harm) - e0) / e0;
            ctx.at_most("dynamics/energy_drift_per_1000_steps", 9,
                        drift * 1000.0 / static_cast<double>(p.energy_steps), 1e-8);
            const auto back = propagate(out, harm, -p.energy_dt, p.energy_steps);
            ctx.at_most("dynamics/time_reversal", 0, max_abs_diff(back.amplitudes(), coherent.amplitudes()), 1e-10);
            ctx.result("unitarity", {{"steps", p.energy_steps}, {"dt", p.energy_dt}, {"norm_drift_per_step", per_step},
                                     {"relative_energy_drift", drift}});
        });

        ctx.guard("dynamics/free_gaussian", 9, [&] {
            const auto& g = p.free_packet;
            const auto n = static_cast<std::size_t>(std::llround(p.free_time / p.free_dt));
            const double t = static_cast<double>(n) * p.free_dt;
            const auto psi = build_state(StateSpec::gaussian(g.q0, g.sigma, g.p0), p.grid, hbar);
            const auto out = propagate(psi, free, p.free_dt, n);
            const double s = g.sigma * std::sqrt(1.0 + std::pow(hbar * t / (2.0 * p.mass * g.sigma * g.sigma), 2));
            const double centre = g.q0 + g.p0 * t / p.mass;
            double worst = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double x = p.grid.coordinate(i) - centre;
                const double exact = std::exp(-x * x / (2.0 * s * s)) / std::sqrt(2.0 * std::numbers::pi * s * s);
                worst = std::max(worst, std::abs(std::norm(out[i]) - exact));
                m2 += x * x * std::norm(out[i]);
            }
            const double width = std::sqrt(m2 * p.grid.spacing());
            ctx.within("dynamics/free_gaussian/width", 9, width, s, 1e-6);
            ctx.at_most("dynamics/free_gaussian/density_deviation", 9, worst, 1e-6);
            ctx.result("free_gaussian", {{"t", t}, {"width", width}, {"width_exact", s}, {"density_deviation", worst}});
        });

        ctx.guard("dynamics/harmonic_centre", 9, [&] {
            const auto n = static_cast<std::size_t>(std::llround(p.centre_time / p.centre_dt));
            const double t = static_cast<double>(n) * p.centre_dt;
            const auto out = propagate(coherent, harm, p.centre_dt, n);
            const double exact = p.coherent_q0 * std::cos(p.omega * t);
            ctx.within("dynamics/harmonic_centre/mean", 9, mean_position(out), exact, 1e-6);
            double worst = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double x = p.grid.coordinate(i) - exact;
                const double ref = std::exp(-x * x / (2.0 * sigma0 * sigma0)) /
                                   std::sqrt(2.0 * std::numbers::pi * sigma0 * sigma0);
                worst = std::max(worst, std::abs(std::norm(out[i]) - ref));
            }
            ctx.at_most("dynamics/harmonic_centre/density_deviation", 9, worst, 1e-6);
            ctx.result("harmonic_centre", {{"t", t}, {"mean", mean_position(out)}, {"exact", exact}});
        });

        ctx.guard("dynamics/continuity", 9, [&] {
            // Refine space and time together; the residual is second order in both.
            std::vector<double> l2;
            for (const std::size_t r : {1u, 2u, 4u}) {
                const auto g = Grid1D::centered(p.continuity_points * r, p.continuity_length, Boundary::truncated);
                const auto psi = build_state(StateSpec::gaussian(0.0, 1.0, 1.0), g, hbar);
                const double dt = p.continuity_dt / static_cast<double>(r);
                const auto snaps = propagate_snapshots(psi, free, dt, 2 * r, 1);
                const std::vector<WaveFunction> three{snaps[r - 1], snaps[r], snaps[r + 1]};
                l2.push_back(continuity_residual(three, p.mass, dt, DiffScheme::central).max_l2);
            }
            const double order_1 = std::log2(l2[0] / l2[1]), order_2 = std::log2(l2[1] / l2[2]);
            ctx.within("dynamics/continuity/order_coarse", 9, order_1, 2.0, 0.1);
            ctx.within("dynamics/continuity/order_fine", 9, order_2, 2.0, 0.1);

            // Stationary states carry no residual beyond roundoff.
            const auto ground = build_state(StateSpec::gaussian(0.0, sigma0, 0.0), p.grid, hbar);
            const auto gs = propagate_snapshots(ground, harm, 0.01, 2, 1);
            const double ground_res = continuity_residual(gs, p.mass, 0.01).max_l2;
            ctx.at_most("dynamics/continuity/stationary_residual", 0, ground_res, 1e-10);
            const auto pg = Grid1D::periodic_for_momentum(1.0, hbar, 4, 256);
            const auto pw = propagate_snapshots(build_state(StateSpec::plane_wave(1.0), pg, hbar), free, 0.01, 2, 1);
            const double plane_res = continuity_residual(pw, p.mass, 0.01).max_l2;
            ctx.at_most("dynamics/continuity/plane_wave_residual", 0, plane_res, 1e-10);
            ctx.result("continuity", {{"l2_by_refinement", l2},
                                      {"orders", {order_1, order_2}},
                                      {"stationary_residual", ground_res},
                                      {"plane_wave_residual", plane_res}});
        });

        struct TrajCase {
            const char* name;
            WaveFunction psi;
            HamiltonianSpec ham;
        };
        const auto& g = p.free_packet;
        const auto pg = Grid1D::periodic_for_momentum(1.0, hbar, 4, 256);
        const std::vector<TrajCase> cases{
            {"free", build_state(StateSpec::gaussian(g.q0, g.sigma, g.p0), p.grid, hbar), free},
            {"harmonic", coherent, harm},
            {"plane_wave", build_state(StateSpec::plane_wave(1.0), pg, hbar), free},
        };
        nlohmann::json traj = nlohmann::json::object();
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const auto& tc = cases[c];
            ctx.guard(std::string("dynamics/equivariance/") + tc.name, 9, [&] {
                TrajectoryOptions opts;
                opts.record_every = std::max<std::size_t>(1, p.traj_steps / 3);
                const auto bundle =
                    integrate_trajectories(tc.psi, tc.ham, p.traj_dt, p.traj_steps, p.n_traj, ctx.seed() + c, opts);
                const auto fin = propagate(tc.psi, tc.ham, p.traj_dt, p.traj_steps);
                const auto col = bundle.column(bundle.times.size() - 1);
                const double tv = histogram_tv(col, fin.grid(), fin.density(), p.cells_per_bin);
                ctx.at_most(std::string("dynamics/equivariance/") + tc.name + "/tv", 9, tv, 0.02);
                ctx.at_most(std::string("dynamics/equivariance/") + tc.name + "/stopped", 0,
                            static_cast<double>(bundle.stopped.size()), 0.0);
                nlohmann::json entry{{"tv", tv}, {"stopped", bundle.stopped.size()}, {"n_traj", p.n_traj}};

                if (std::string(tc.name) == "harmonic") {
                    // The displacement removes most of the sampling noise of the initial draw.
                    const auto start = bundle.column(0);
                    double shift = 0.0;
                    for (std::size_t k = 0; k < col.size(); ++k) shift += col[k] - start[k];
                    shift /= static_cast<double>(col.size());
                    const double t = bundle.times.back();
                    const double exact = p.coherent_q0 * (std::cos(p.omega * t) - 1.0);
                    ctx.within("dynamics/equivariance/harmonic/centroid_displacement", 0, shift, exact,
                               1e-3 * p.coherent_q0);
                    entry["centroid_displacement"] = shift;
                    entry["centroid_displacement_exact"] = exact;
                    // A thousand paths are plenty for plotting.
                    TrajectoryBundle head = bundle;
                    head.n_traj = std::min<std::size_t>(bundle.n_traj, 1000);
                    head.positions.resize(head.n_traj * head.times.size());
                    ctx.artifact("trajectories_harmonic.csv",
                                 [&](std::ostream& os) { write_trajectories_csv(os, head); });
                }
                traj[tc.name] = entry;
            });
        }
        ctx.result("equivariance", traj);

        ctx.artifact("snapshots_free.csv", [&](std::ostream& os) {
            const auto psi = build_state(StateSpec::gaussian(g.q0, g.sigma, g.p0), p.grid, hbar);
            const std::size_t n = static_cast<std::size_t>(std::llround(p.free_time / p.free_dt));
            const std::size_t every = std::max<std::size_t>(1, n / 4);
            const auto snaps = propagate_snapshots(psi, free, p.free_dt, n, every);
            std::vector<double> times;
            for (std::size_t k = 0; k < snaps.size(); ++k) times.push_back(static_cast<double>(k * every) * p.free_dt);
            write_snapshots_csv(os, snaps, times);
        });
    };
}

}  // namespace erps::runner
