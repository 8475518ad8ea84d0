#include <doctest.h>

#include <cmath>
#include <sstream>

#include "erps/superposition.hpp"
#include "oracles.hpp"

using namespace erps;
using oracle::cplx;

namespace {

const Grid1D g60 = Grid1D::centered(1024, 60.0, Boundary::periodic);

SuperpositionSpec pair_of(const StateSpec& a, const StateSpec& b, cplx w1, cplx w2) {
    return std::get<SuperpositionSpec>(StateSpec::superposition(a, b, w1, w2).kind);
}

/// Log-derivative psi'/psi of w1 g1 + w2 g2 written out by hand.
cplx log_derivative(double q, cplx w1, const GaussianSpec& a, cplx w2, const GaussianSpec& b) {
    auto g = [&](const GaussianSpec& s) { return oracle::gaussian(q, s.q0, s.sigma, s.p0, 1.0); };
    auto dg = [&](const GaussianSpec& s) {
        return g(s) * cplx(-(q - s.q0) / (2 * s.sigma * s.sigma), s.p0);
    };
    return (w1 * dg(a) + w2 * dg(b)) / (w1 * g(a) + w2 * g(b));
}

}  // namespace

TEST_SUITE("superposition") {

TEST_CASE("closed-form fields match the hand log-derivative") {
    const GaussianSpec a{-1.0, 1.0, 0.5}, b{1.5, 0.8, -0.3};
    const cplx w1{1.0, 0.0}, w2 = std::polar(0.7, 1.1);
    const auto f = superposed_estimate_fields(pair_of(StateSpec{a}, StateSpec{b}, w1, w2), g60, 1.0);
    for (std::size_t i = 0; i < g60.size(); ++i) {
        const double q = g60.coordinate(i);
        if (std::abs(q) > 6.0 || f.node_mask[i]) continue;
        const cplx ld = log_derivative(q, w1, a, w2, b);
        CHECK(f.p_bar[i] == doctest::Approx(ld.imag()).epsilon(1e-8).scale(1.0));
        CHECK(f.eps_scale[i] == doctest::Approx(2 * ld.real()).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("disjoint branches reduce to each branch's own fields") {
    const GaussianSpec a{-8.0, 1.0, 0.5}, b{8.0, 1.0, -0.3};
    const auto sp = pair_of(StateSpec{a}, StateSpec{b}, 1.0, 1.0);
    const auto f = superposed_estimate_fields(sp, g60, 1.0);
    for (const double q : {-9.0, -8.0, -7.0, 7.0, 8.5}) {
        const auto i = static_cast<std::size_t>(std::lround((q - g60.origin()) / g60.spacing()));
        const double x = g60.coordinate(i);
        const auto& s = x < 0 ? a : b;
        CHECK(f.p_bar[i] == doctest::Approx(s.p0).epsilon(1e-9));
        CHECK(f.eps_scale[i] == doctest::Approx(-(x - s.q0) / (s.sigma * s.sigma)).epsilon(1e-9).scale(1.0));
    }
    const auto rep = overlap_analysis(sp, g60, 1.0);
    CHECK(rep.overlap_set.empty());
    CHECK(rep.interference_linf < 1e-9);
    CHECK(rep.mass_1 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(rep.ms_additivity_gap) < 1e-9);
    // Each unit Gaussian carries E_p^2 = 1/4, so the unweighted sum double counts.
    CHECK(rep.ms_additivity_gap_unweighted == doctest::Approx(-0.25).epsilon(1e-9));
    CHECK(momentum_field_compatibility(sp, g60, 1.0, 1.0).compatible);
}

TEST_CASE("equal branches collapse to the single state") {
    const auto s = StateSpec::gaussian(0.0, 1.0, 0.4);
    const auto rep = overlap_analysis(pair_of(s, s, 1.0, 1.0), g60, 1.0);
    CHECK(rep.ms_error_total == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(rep.total_probability_witness < 1e-10);
}

TEST_CASE("overlapping branches interfere and are incompatible") {
    const auto sp = pair_of(StateSpec::gaussian(-0.5, 1.0, 0.5), StateSpec::gaussian(0.5, 1.0, -0.3), 1.0, 1.0);
    const auto rep = overlap_analysis(sp, g60, 1.0);
    CHECK_FALSE(rep.overlap_set.empty());
    CHECK(rep.total_probability_witness > 0.1);
    CHECK(rep.interference_linf > 1e-3);
    CHECK_FALSE(momentum_field_compatibility(sp, g60, 1.0, 1.0).compatible);
}

TEST_CASE("counter-propagating plane waves") {
    const double p0 = 1.0;
    const auto g = Grid1D::periodic_for_momentum(p0, 1.0, 8, 4096, true);
    const auto sp = pair_of(StateSpec::plane_wave(p0), StateSpec::plane_wave(-p0), 1.0, 1.0);
    const auto rep = overlap_analysis(sp, g, 1.0);
    CHECK(rep.ms_error_total == doctest::Approx(p0 * p0).epsilon(1e-8));
    CHECK(std::abs(rep.ms_error_branch_1) < 1e-12);
    CHECK(std::abs(rep.dispersion_total) < 1e-12);
    const auto f = superposed_estimate_fields(sp, g, 1.0);
    for (std::size_t i = 0; i < g.size(); i += 37) {
        if (f.node_mask[i]) continue;
        const double ref = -2.0 * p0 * std::tan(p0 * g.coordinate(i));
        CHECK(f.eps_scale[i] == doctest::Approx(ref).epsilon(1e-8).scale(1.0));
        CHECK(std::abs(f.p_bar[i]) < 1e-12);
    }
}

TEST_CASE("interference CSV") {
    const auto g = Grid1D::centered(32, 20.0, Boundary::periodic);
    const auto sp = pair_of(StateSpec::gaussian(-2.0, 1.0, 0.0), StateSpec::gaussian(2.0, 1.0, 0.0), 1.0, 1.0);
    std::ostringstream os;
    write_interference_csv(os, g, decompose_branches(sp, g, 1.0), overlap_analysis(sp, g, 1.0));
    const std::string text = os.str();
    CHECK(text.rfind("q,rho,rho_1,rho_2,interference\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 33);
}

}  // TEST_SUITE
