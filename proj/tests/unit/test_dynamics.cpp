#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "erps/dynamics.hpp"
#include "erps/ensemble.hpp"
#include "erps/error.hpp"
#include "erps/estimation.hpp"
#include "erps/log.hpp"
#include "oracles.hpp"

using namespace erps;
using oracle::cplx;

namespace {

const Grid1D g80 = Grid1D::centered(1024, 80.0, Boundary::periodic);

/// Collects warnings for the lifetime of the object.
struct WarningCapture {
    std::vector<std::string> messages;
    WarningHandler previous;
    WarningCapture() {
        previous = set_warning_handler([this](const std::string& m) { messages.push_back(m); });
    }
    ~WarningCapture() { set_warning_handler(previous); }
};

double mean_q(const WaveFunction& psi) {
    return oracle::quad(psi.grid(), [&](double q, std::size_t i) { return q * std::norm(psi[i]); });
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("free Gaussian spreads as the closed form") {
    const double s = 1.0, p0 = 1.0, t = 4.0;
    const auto psi = build_state(StateSpec::gaussian(-5.0, s, p0), g80, 1.0);
    const auto out = propagate(psi, HamiltonianSpec::free(1.0), 0.01, 400);
    const double st = std::sqrt(s * s + std::pow(t / (2 * s), 2));
    double worst = 0.0;
    for (std::size_t i = 0; i < g80.size(); ++i) {
        worst = std::max(worst, std::abs(std::norm(out[i]) - oracle::gaussian_density(g80.coordinate(i), -5.0 + p0 * t, st)));
    }
    CHECK(worst < 1e-6);
    CHECK(std::abs(out.norm() - 1.0) < 400 * 1e-12);
}

TEST_CASE("harmonic coherent state follows q0 cos(omega t)") {
    const double omega = 1.3, m = 0.8, q0 = 2.5;
    const auto h = HamiltonianSpec::harmonic(g80, m, omega);
    const double s0 = std::sqrt(1.0 / (2 * m * omega));
    const auto psi = build_state(StateSpec::gaussian(q0, s0, 0.0), g80, 1.0);
    const double dt = 1e-3;
    const auto out = propagate(psi, h, dt, 1500);
    const double t = 1.5;
    CHECK(mean_q(out) == doctest::Approx(q0 * std::cos(omega * t)).epsilon(1e-6).scale(1.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < g80.size(); ++i) {
        worst = std::max(worst, std::abs(std::norm(out[i]) - oracle::gaussian_density(g80.coordinate(i), q0 * std::cos(omega * t), s0)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("free plane wave is stationary up to a global phase") {
    const auto g = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 256);
    const auto psi = build_state(StateSpec::plane_wave(1.0), g, 1.0);
    const auto out = propagate(psi, HamiltonianSpec::free(1.0), 0.05, 100);
    const cplx phase = out[0] / psi[0];
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(out[i] - phase * psi[i]) < 1e-12);
    CHECK(std::arg(phase) == doctest::Approx(std::remainder(-0.5 * 5.0, 2 * oracle::pi)).epsilon(1e-10));
}

TEST_CASE("time reversal and negative steps") {
    const auto h = HamiltonianSpec::harmonic(g80, 1.0, 1.0);
    const auto psi = build_state(StateSpec::gaussian(3.0, 0.8, 0.4), g80, 1.0);
    const auto back = propagate(propagate(psi, h, 0.01, 300), h, -0.01, 300);
    double worst = 0.0;
    for (std::size_t i = 0; i < g80.size(); ++i) worst = std::max(worst, std::abs(back[i] - psi[i]));
    CHECK(worst < 1e-10);
    CHECK_THROWS_AS(SplitStepPropagator(g80, h, 1.0, 0.0), PreconditionError);
}

TEST_CASE("step-size and truncated-grid warnings") {
    WarningCapture cap;
    const auto gt = Grid1D::centered(128, 20.0, Boundary::truncated);
    SplitStepPropagator(gt, HamiltonianSpec::free(1.0), 1.0, 1e-3);
    CHECK(cap.messages.size() == 1);
    SplitStepPropagator(g80, HamiltonianSpec::free(1.0), 1.0, 100 * step_size_guideline(g80, 1.0, 1.0));
    CHECK(cap.messages.size() == 2);
    SplitStepPropagator(g80, HamiltonianSpec::free(1.0), 1.0, 0.5 * step_size_guideline(g80, 1.0, 1.0));
    CHECK(cap.messages.size() == 2);
}

TEST_CASE("Hamiltonian validation") {
    CHECK_THROWS_AS(HamiltonianSpec::free(0.0).validate(g80), PreconditionError);
    HamiltonianSpec bad = HamiltonianSpec::free(1.0);
    bad.potential.assign(3, 0.0);
    CHECK_THROWS_AS(bad.validate(g80), PreconditionError);
    bad.potential.assign(g80.size(), 0.0);
    bad.potential[5] = INFINITY;
    CHECK_THROWS_AS(bad.validate(g80), PreconditionError);
}

TEST_CASE("average energy examples") {
    const auto g = Grid1D::periodic_for_momentum(1.5, 1.0, 4, 256);
    CHECK(average_energy(build_state(StateSpec::plane_wave(1.5), g, 1.0), HamiltonianSpec::free(2.0)) ==
          doctest::Approx(1.5 * 1.5 / 4.0).epsilon(1e-12));
    const double s = 0.7, p0 = 0.9, m = 1.5;
    CHECK(average_energy(build_state(StateSpec::gaussian(0.0, s, p0), g80, 1.0), HamiltonianSpec::free(m)) ==
          doctest::Approx(p0 * p0 / (2 * m) + 1.0 / (8 * m * s * s)).epsilon(1e-10));

    // Coherent state over one period, sampled every twentieth of it.
    const auto h = HamiltonianSpec::harmonic(g80, 1.0, 1.0);
    auto cur = build_state(StateSpec::gaussian(3.0, std::sqrt(0.5), 0.0), g80, 1.0);
    const double e0 = average_energy(cur, h);
    const double dt = 2 * oracle::pi / 62840;
    for (int k = 0; k < 20; ++k) {
        cur = propagate(cur, h, dt, 3142);
        const double drift = std::abs(average_energy(cur, h) - e0) / e0;
        CAPTURE(drift);
        CHECK(drift < 1e-8);
    }
}

TEST_CASE("continuity residual examples") {
    const auto ground = build_state(StateSpec::gaussian(0.0, std::sqrt(0.5), 0.0), g80, 1.0);
    const auto h = HamiltonianSpec::harmonic(g80, 1.0, 1.0);
    CHECK(continuity_residual(propagate_snapshots(ground, h, 0.01, 2), 1.0, 0.01).max_l2 < 1e-10);

    const auto pg = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 256);
    const auto pw = propagate_snapshots(build_state(StateSpec::plane_wave(1.0), pg, 1.0), HamiltonianSpec::free(1.0), 0.01, 2);
    CHECK(continuity_residual(pw, 1.0, 0.01).max_l2 < 1e-12);

    WarningCapture quiet;
    std::vector<double> l2;
    for (const std::size_t r : {1u, 2u, 4u}) {
        const auto g = Grid1D::centered(256 * r, 40.0, Boundary::truncated);
        const double dt = 0.02 / r;
        const auto snaps = propagate_snapshots(build_state(StateSpec::gaussian(0.0, 1.0, 1.0), g, 1.0),
                                               HamiltonianSpec::free(1.0), dt, 2 * r);
        const std::vector<WaveFunction> three{snaps[r - 1], snaps[r], snaps[r + 1]};
        l2.push_back(continuity_residual(three, 1.0, dt).max_l2);
    }
    CHECK(std::log2(l2[1] / l2[2]) == doctest::Approx(2.0).epsilon(0.05));

    const auto snaps2 = propagate_snapshots(ground, h, 0.01, 1);
    CHECK_THROWS_AS(continuity_residual(snaps2, 1.0, 0.01), PreconditionError);
}

TEST_CASE("continuity flags node-dominated states") {
    const auto g = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 1024);
    const auto snaps = propagate_snapshots(build_state(StateSpec::cosine(1.0), g, 1.0), HamiltonianSpec::free(1.0), 1e-3, 2);
    CHECK(continuity_residual(snaps, 1.0, 1e-3).node_flag);
}

TEST_CASE("snapshots cadence") {
    const auto psi = build_state(StateSpec::gaussian(0.0, 1.0, 0.0), g80, 1.0);
    CHECK(propagate_snapshots(psi, HamiltonianSpec::free(1.0), 0.01, 10, 5).size() == 3);
}

TEST_CASE("free spreading Gaussian has the analytic linear velocity field") {
    const double s = 1.0, t = 2.0, m = 1.0;
    const auto out = propagate(build_state(StateSpec::gaussian(0.0, s, 0.5), g80, 1.0), HamiltonianSpec::free(m), 0.01, 200);
    const auto v = bohmian_velocity_field(out, polar_decompose(out), m);
    const double tau = t / (2 * m * s * s);
    const double rate = tau * (1.0 / (2 * m * s * s)) / (1 + tau * tau);
    for (const double q : {-2.0, 0.0, 1.0, 3.0}) {
        const auto i = static_cast<std::size_t>(std::lround((q - g80.origin()) / g80.spacing()));
        const double x = g80.coordinate(i);
        CHECK(v.from_phase[i] == doctest::Approx(0.5 / m + (x - 0.5 * t / m) * rate).epsilon(1e-8));
    }
}

TEST_CASE("trajectories: plane wave translates uniformly") {
    const auto g = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 256);
    const auto b = integrate_trajectories(build_state(StateSpec::plane_wave(1.0), g, 1.0), HamiltonianSpec::free(2.0),
                                          0.01, 100, 500, 3);
    REQUIRE(b.times.size() == 101);
    for (std::size_t k = 0; k < b.n_traj; ++k) {
        const double moved = b.at(k, 100) - b.at(k, 0);
        const double expect = 0.5 * 1.0;
        CHECK(std::abs(std::remainder(moved - expect, g.extent())) < 1e-9);
    }
    CHECK(b.stopped.empty());
}

TEST_CASE("trajectories: equivariance and harmonic centroid") {
    const auto h = HamiltonianSpec::harmonic(g80, 1.0, 1.0);
    const auto psi = build_state(StateSpec::gaussian(3.0, std::sqrt(0.5), 0.0), g80, 1.0);
    TrajectoryOptions opts;
    opts.record_every = 50;
    const auto b = integrate_trajectories(psi, h, 0.01, 150, 100000, 4, opts);
    CHECK(b.times.size() == 4);
    const auto fin = propagate(psi, h, 0.01, 150);
    const auto col = b.column(3);
    CHECK(histogram_tv(col, g80, fin.density(), 8) < 0.02);
    double shift = 0.0;
    const auto start = b.column(0);
    for (std::size_t k = 0; k < col.size(); ++k) shift += col[k] - start[k];
    shift /= col.size();
    CHECK(shift == doctest::Approx(3.0 * (std::cos(1.5) - 1.0)).epsilon(1e-3 * 3.0).scale(1.0));

    const auto again = integrate_trajectories(psi, h, 0.01, 150, 1000, 4, opts);
    for (std::size_t k = 0; k < 1000; ++k) CHECK(again.at(k, 3) == b.at(k, 3));
}

TEST_CASE("classical limit scan examples") {
    const auto g = Grid1D::centered(2048, 16 * oracle::pi, Boundary::periodic);
    const std::vector<double> hbars{1.0, 0.1};
    const auto r = classical_limit_scan(StateSpec::gaussian(0.0, 1.0, 2.0), g, hbars);
    REQUIRE(r.status == ClassicalLimitStatus::scaling);
    CHECK(r.ratios[0] == doctest::Approx(1.0 / (2 * 1.0 * 2.0)).epsilon(1e-8));
    CHECK(r.ratios[0] / r.ratios[1] == doctest::Approx(10.0).epsilon(1e-8));
    CHECK(*r.slope == doctest::Approx(1.0).epsilon(1e-8));

    const auto pg = Grid1D::periodic_for_momentum(1.0, 1.0, 8, 1024);
    const std::vector<double> hs{1.0, 0.5, 0.25};
    CHECK(classical_limit_scan(StateSpec::plane_wave(1.0), pg, hs).status == ClassicalLimitStatus::exactly_classical);
    const auto cg = Grid1D::periodic_for_momentum(1.0, 1.0, 8, 4096, true);
    CHECK(classical_limit_scan(StateSpec::cosine(1.0), cg, hs).status == ClassicalLimitStatus::undefined_ratio);
    CHECK_THROWS_AS(classical_limit_scan(StateSpec::plane_wave(1.0), pg, std::vector<double>{1.0}), PreconditionError);
}

TEST_CASE("CSV exports") {
    const auto psi = build_state(StateSpec::gaussian(0.0, 1.0, 0.0), Grid1D::centered(16, 10.0, Boundary::periodic), 1.0);
    std::ostringstream os;
    const std::vector<WaveFunction> snaps{psi};
    const std::vector<double> times{0.0};
    write_snapshots_csv(os, snaps, times);
    const std::string text = os.str();
    CHECK(text.rfind("t,q,re,im,rho,S\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);

    TrajectoryBundle b;
    b.n_traj = 2;
    b.times = {0.0, 1.0};
    b.positions = {0.1, 0.2, 0.3, NAN};
    std::ostringstream ts;
    write_trajectories_csv(ts, b);
    CHECK(ts.str() == "traj_id,t,q\n0,0,0.10000000000000001\n0,1,0.20000000000000001\n1,0,0.29999999999999999\n");
}

}  // TEST_SUITE
