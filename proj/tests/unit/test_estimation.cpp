#include <doctest.h>

#include <cmath>

#include "erps/error.hpp"
#include "erps/estimation.hpp"
#include "erps/quantum.hpp"
#include "erps/random_state.hpp"
#include "oracles.hpp"

using namespace erps;
using oracle::cplx;

namespace {

const Grid1D wide = Grid1D::centered(1024, 40.0, Boundary::periodic);
const Grid1D cosine_grid = Grid1D::periodic_for_momentum(1.0, 1.0, 8, 4096, true);

PolarFields gaussian_fields(double sigma, double p0 = 0.0, double hbar = 1.0) {
    return polar_decompose(oracle::tabulate(wide, hbar, [&](double q) { return oracle::gaussian(q, 0.0, sigma, p0, hbar); }));
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("ms_error_p and fisher_q examples") {
    const auto pg = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 256);
    const auto plane = polar_decompose(build_state(StateSpec::plane_wave(1.0), pg, 1.0));
    CHECK(std::abs(ms_error_p(plane)) < 1e-20);
    CHECK(std::abs(fisher_q(plane)) < 1e-20);

    const auto cos_f = polar_decompose(build_state(StateSpec::cosine(1.0), cosine_grid, 1.0));
    CHECK(ms_error_p(cos_f) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fisher_q(cos_f) == doctest::Approx(4.0).epsilon(1e-8));

    for (const double sigma : {0.5, 1.0, 2.0}) {
        const auto f = gaussian_fields(sigma, 0.3, 0.8);
        CHECK(fisher_q(f) == doctest::Approx(1.0 / (sigma * sigma)).epsilon(1e-10));
        CHECK(ms_error_p(f) == doctest::Approx(0.64 / (4 * sigma * sigma)).epsilon(1e-10));
    }
}

TEST_CASE("ms_error_q examples") {
    const auto g = gaussian_fields(1.3);
    const auto eg = ms_error_q(g);
    CHECK(eg.value == doctest::Approx(1.69).epsilon(1e-10));
    CHECK_FALSE(eg.grid_limited);

    const auto pg = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 256);
    CHECK(ms_error_q(polar_decompose(build_state(StateSpec::plane_wave(1.0), pg, 1.0))).grid_limited);

    const double d = 7.0, s = 1.0;
    const auto mix = StateSpec::superposition(StateSpec::gaussian(-d, s, 0.0), StateSpec::gaussian(d, s, 0.0));
    const auto g60 = Grid1D::centered(1024, 60.0, Boundary::periodic);
    CHECK(ms_error_q(polar_decompose(build_state(mix, g60, 1.0))).value == doctest::Approx(s * s + d * d).epsilon(1e-10));
}

TEST_CASE("cramer_rao_position_check") {
    CHECK(cramer_rao_position_check(gaussian_fields(1.0)).ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cramer_rao_position_check(gaussian_fields(2.0)).ratio == doctest::Approx(1.0).epsilon(1e-6));

    // Equal-weight mixture at d = 2 sigma: both factors by hand-written quadrature.
    const double d = 2.0;
    const auto rho = [&](double q) {
        return 0.5 * (oracle::gaussian_density(q, -d / 2, 1.0) + oracle::gaussian_density(q, d / 2, 1.0));
    };
    std::vector<cplx> amp;
    for (const double q : wide.coordinates()) amp.emplace_back(std::sqrt(rho(q)), 0.0);
    const auto f = polar_decompose(WaveFunction(wide, amp, 1.0).normalized());
    const double var = oracle::quad(wide, [&](double q, std::size_t) { return q * q * rho(q); });
    const double j = oracle::quad(wide, [&](double q, std::size_t) {
        const double dr = oracle::fd_derivative(rho, q);
        return dr * dr / rho(q);
    });
    const auto r = cramer_rao_position_check(f);
    CHECK(r.ratio > 1.0);
    CHECK(r.ratio == doctest::Approx(var * j).epsilon(1e-6));

    const auto pg = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 256);
    CHECK_THROWS_AS(cramer_rao_position_check(polar_decompose(build_state(StateSpec::plane_wave(1.0), pg, 1.0))),
                    PreconditionError);
}

TEST_CASE("cramer_rao_momentum_gaussian_check") {
    const auto a = cramer_rao_momentum_gaussian_check(1.0, 1.0, 1.0);
    CHECK(a.per_xi_ms == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(a.ratio == doctest::Approx(1.0).epsilon(1e-8));
    const auto b = cramer_rao_momentum_gaussian_check(2.0, 1.0, 1.0);
    CHECK(b.per_xi_ms == doctest::Approx(1.0 / 16).epsilon(1e-10));
    CHECK(b.linear_slope == doctest::Approx(-1.0 / 8).epsilon(1e-10));
    CHECK(b.linear_residual < 1e-10);
    CHECK_THROWS_AS(cramer_rao_momentum_gaussian_check(1.0, 0.0, 1.0), PreconditionError);
}

TEST_CASE("variance_decomposition examples") {
    const auto pg = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 256);
    const auto plane = build_state(StateSpec::plane_wave(1.0), pg, 1.0);
    const auto vp = variance_decomposition(plane, polar_decompose(plane));
    CHECK(std::abs(vp.ms_error_p) + std::abs(vp.dispersion_p) + std::abs(vp.var_p) < 1e-12);

    const auto c = build_state(StateSpec::cosine(1.0), cosine_grid, 1.0);
    const auto vc = variance_decomposition(c, polar_decompose(c));
    CHECK(vc.ms_error_p == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(vc.dispersion_p) < 1e-12);
    CHECK(vc.var_p == doctest::Approx(1.0).epsilon(1e-8));

    const auto g = build_state(StateSpec::gaussian(0.5, 0.7, 1.1), wide, 1.0);
    const auto vg = variance_decomposition(g, polar_decompose(g));
    const double e = 1.0 / (4 * 0.49);
    CHECK(vg.ms_error_p == doctest::Approx(e).epsilon(1e-10));
    CHECK(std::abs(vg.dispersion_p) < 1e-12);
    CHECK(vg.var_p == doctest::Approx(e).epsilon(1e-10));
}

TEST_CASE("uncertainty_suite examples") {
    const auto g = build_state(StateSpec::gaussian(0.0, 1.0, 0.5), wide, 1.0);
    const auto rg = uncertainty_suite(g, polar_decompose(g));
    REQUIRE(rg.product_pq);
    CHECK(*rg.product_pq == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(*rg.hk_product == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(rg.robertson_holds);

    const auto g60 = Grid1D::centered(1024, 60.0, Boundary::periodic);
    const auto sep = build_state(
        StateSpec::superposition(StateSpec::gaussian(-8.0, 1.0, 0.0), StateSpec::gaussian(8.0, 1.0, 0.0)), g60, 1.0);
    const auto rs = uncertainty_suite(sep, polar_decompose(sep));
    REQUIRE(rs.product_pq);
    CHECK(*rs.product_pq > 0.25);
    CHECK(rs.tradeoff_holds);

    const auto c = build_state(StateSpec::cosine(1.0), cosine_grid, 1.0);
    const auto rc = uncertainty_suite(c, polar_decompose(c));
    CHECK(rc.grid_limited);
    CHECK_FALSE(rc.hk_product);
}

TEST_CASE("weak value examples") {
    const auto pg = Grid1D::periodic_for_momentum(1.2, 1.0, 4, 256);
    const auto plane = build_state(StateSpec::plane_wave(1.2), pg, 1.0);
    const auto pf = polar_decompose(plane);
    for (const cplx w : weak_value_field(plane, pf)) CHECK(std::abs(w - cplx(1.2, 0.0)) < 1e-10);

    const double q0 = -0.5, sigma = 0.8, p0 = 1.5, hbar = 0.9;
    const auto psi = oracle::tabulate(wide, hbar, [&](double q) { return oracle::gaussian(q, q0, sigma, p0, hbar); });
    const auto f = polar_decompose(psi);
    for (const double q : {-2.0, -0.123, 0.0, 1.7}) {
        const cplx ref(p0, 0.5 * hbar * (q - q0) / (sigma * sigma));
        CHECK(std::abs(weak_value(psi, f, q) - ref) < 1e-8);
    }

    const auto w = weak_value_field(psi, f);
    const double im2 = oracle::quad(wide, [&](double, std::size_t i) {
        return f.masked(i) ? 0.0 : w[i].imag() * w[i].imag() * f.rho[i];
    });
    CHECK(im2 == doctest::Approx(ms_error_p(f)).epsilon(1e-8));
}

TEST_CASE("weak value identities on a superposition with analytic derivative") {
    // psi = a(q) + b(q) with a, b Gaussians; psi' written out by hand.
    const double hbar = 1.0;
    auto comp = [&](double q, double q0, double s, double p0) { return oracle::gaussian(q, q0, s, p0, hbar); };
    auto dcomp = [&](double q, double q0, double s, double p0) {
        return cplx(-(q - q0) / (2 * s * s), p0 / hbar) * comp(q, q0, s, p0);
    };
    const auto f_psi = [&](double q) { return comp(q, -1.0, 0.7, 1.0) + cplx(0.3, 0.5) * comp(q, 1.5, 1.1, -0.5); };
    const auto f_dpsi = [&](double q) { return dcomp(q, -1.0, 0.7, 1.0) + cplx(0.3, 0.5) * dcomp(q, 1.5, 1.1, -0.5); };
    const auto psi = oracle::tabulate(wide, hbar, f_psi);
    const auto f = polar_decompose(psi);
    const auto w = weak_value_field(psi, f);
    for (std::size_t i = 0; i < wide.size(); ++i) {
        const double q = wide.coordinate(i);
        if (std::abs(q) > 6.0) continue;
        const cplx ref = -cplx(0.0, hbar) * f_dpsi(q) / f_psi(q);
        CHECK(std::abs(w[i] - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
        CHECK(w[i].real() == doctest::Approx(f.grad_s[i]).epsilon(1e-8).scale(1.0));
        CHECK(w[i].imag() == doctest::Approx(-0.5 * hbar * f.grad_log_rho[i]).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("weak value refuses nodes") {
    const auto c = build_state(StateSpec::cosine(1.0), Grid1D::periodic_for_momentum(1.0, 1.0, 4, 1024), 1.0);
    const auto f = polar_decompose(c);
    std::size_t node = 0;
    while (!f.masked(node)) ++node;
    CHECK_THROWS_AS(weak_value(c, f, c.grid().coordinate(node)), NodeQueryError);
}

TEST_CASE("bohmian velocity examples") {
    const auto pg = Grid1D::periodic_for_momentum(1.0, 1.0, 4, 256);
    const auto plane = build_state(StateSpec::plane_wave(1.0), pg, 1.0);
    const auto v = bohmian_velocity_field(plane, polar_decompose(plane), 2.0);
    for (std::size_t i = 0; i < v.from_phase.size(); ++i) {
        CHECK(v.from_phase[i] == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(v.from_weak_value[i] == doctest::Approx(v.from_phase[i]).epsilon(1e-8));
    }
    const auto real = build_state(StateSpec::gaussian(0.0, 1.0, 0.0), wide, 1.0);
    const auto vr = bohmian_velocity_field(real, polar_decompose(real), 1.0);
    for (std::size_t i = 0; i < vr.from_phase.size(); ++i) {
        if (vr.node_mask[i]) CHECK(std::isnan(vr.from_phase[i]));
        // FFT roundoff divided by a tiny density leaves ~1e-10 far out in the tails.
        else if (std::abs(wide.coordinate(i)) < 6.0) CHECK(std::abs(vr.from_phase[i]) < 1e-10);
    }
}

TEST_CASE("estimation identities on random states") {
    const auto g = Grid1D::centered(512, 40.0, Boundary::periodic);
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto psi = build_state(random_smooth_state(g, 1.0, 44, k), g, 1.0);
        const auto f = polar_decompose(psi);
        const auto d = variance_decomposition(psi, f);
        CHECK(d.ms_error_p + d.dispersion_p == doctest::Approx(d.var_p).epsilon(1e-8));
        const auto u = uncertainty_suite(psi, f);
        REQUIRE(u.product_pq);
        CHECK(u.tradeoff_holds);
        CHECK(u.kennard_holds);
        CHECK(u.robertson_holds);
        const auto rep = estimation_report(psi, f);
        CHECK(rep.var_p == doctest::Approx(rep.ms_error_p + rep.dispersion_p).epsilon(1e-8));
        CHECK_FALSE(rep.grid_limited);
    }
}

TEST_CASE("perturbed Gaussians exceed the position bound quadratically") {
    auto ratio_excess = [](double delta) {
        std::vector<cplx> amp;
        for (const double q : wide.coordinates()) amp.emplace_back(std::exp(0.5 * (-0.5 * q * q + delta * std::cos(q))), 0.0);
        return cramer_rao_position_check(polar_decompose(WaveFunction(wide, amp, 1.0).normalized())).ratio - 1.0;
    };
    const double e1 = ratio_excess(0.01), e2 = ratio_excess(0.02);
    CHECK(e1 > 0.0);
    CHECK(e2 / e1 == doctest::Approx(4.0).epsilon(0.05));
}

}  // TEST_SUITE
