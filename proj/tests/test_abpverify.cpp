#include "abplab/abpverify.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace abplab;

namespace {

Region interior_region(const DiscreteMMSpace& s) {
    std::vector<PointId> ids;
    for (PointId p = 0; p < s.size(); ++p)
        if (s.interior(p)) ids.push_back(p);
    return Region::of(std::move(ids), RegionKind::OpenDomain);
}

Region node_block(PointId lo, PointId hi) {
    std::vector<PointId> ids;
    for (PointId p = lo; p <= hi; ++p) ids.push_back(p);
    return Region::of(std::move(ids));
}

ScalarField field_from(const DiscreteMMSpace& s, const std::function<double(double)>& f) {
    ScalarField u;
    u.values.resize(s.size());
    for (PointId p = 0; p < s.size(); ++p) u.values[p] = f(s.coord(p, 0));
    return u;
}

Region disc_region(const DiscreteMMSpace& s, double R) {
    std::vector<PointId> ids;
    for (PointId p = 0; p < s.size(); ++p) {
        const auto c = s.coords(p);
        if (c[0] * c[0] + c[1] * c[1] < R * R) ids.push_back(p);
    }
    return Region::of(std::move(ids), RegionKind::OpenDomain);
}
}  // namespace

TEST(VerifyAbp, EqualityCaseExactZeroSlack) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 201);
    const Region omega = interior_region(s);
    ScalarField u;
    u.values.assign(s.size(), 0.0);
    const auto report =
        verify_abp(s, Region::of({100}), omega, u, 0.1, 0.0, 2.0, ContactKind::R2);
    EXPECT_TRUE(report.satisfied);
    EXPECT_EQ(report.slack, 0.0);
    EXPECT_EQ(report.coefficient, 1.0);
    EXPECT_EQ(report.mass_D, report.mass_R);
    EXPECT_NEAR(report.laplacian_sup, 0.0, 1e-12);
    ASSERT_TRUE(report.has_exp_bound);
    EXPECT_TRUE(report.exp_satisfied);
}

TEST(VerifyAbp, ParabolaFlatCase) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 201);
    const Region omega = node_block(4, 196);
    const double a = 8.0;
    const auto u = field_from(s, [&](double x) { return a * (x - 0.5) * (x - 0.5); });
    const Region d_set = node_block(70, 130);
    const auto report = verify_abp(s, d_set, omega, u, 0.1, 0.0, 2.0, ContactKind::R2);
    EXPECT_TRUE(report.satisfied);
    EXPECT_GT(report.slack, 0.0);
    EXPECT_NEAR(report.laplacian_sup, 2.0 * a, 1e-6);
    ASSERT_TRUE(report.has_exp_bound);
    EXPECT_TRUE(report.exp_satisfied);
    // polynomial branch below the exponential branch
    EXPECT_LE(report.bound, report.exp_bound * (1.0 + 1e-12));
    EXPECT_NEAR(report.coefficient,
                std::pow(1.0 + 0.1 * report.laplacian_sup / 2.0, 2.0), 1e-9);
}

TEST(VerifyAbp, NegativeCurvatureCoefficientDominates) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 201);
    const Region omega = node_block(4, 196);
    const auto u = field_from(s, [](double x) { return 8.0 * (x - 0.5) * (x - 0.5); });
    const Region d_set = node_block(70, 130);
    const auto flat = verify_abp(s, d_set, omega, u, 0.1, 0.0, 2.0, ContactKind::R2);
    const auto neg = verify_abp(s, d_set, omega, u, 0.1, -1.0, 2.0, ContactKind::R2);
    EXPECT_GT(neg.coefficient, flat.coefficient);
    EXPECT_TRUE(neg.satisfied);
    EXPECT_GE(neg.slack, flat.slack);
}

TEST(VerifyAbp, PositiveCurvatureOnCircle) {
    const auto s = DiscreteMMSpace::circle(200);
    const Region omega = node_block(20, 180);
    ScalarField u;
    u.values.resize(s.size());
    for (PointId p = 0; p < s.size(); ++p) u.values[p] = -0.2 * std::cos(s.coord(p, 0));
    const Region d_set = node_block(95, 105);
    const auto report = verify_abp(s, d_set, omega, u, 0.5, 1.0, 2.0, ContactKind::R2);
    EXPECT_TRUE(report.satisfied);
    EXPECT_EQ(report.phi_inf, 0.0);  // D lies inside Omega
    EXPECT_GT(report.theta_sup, 0.0);
}

TEST(VerifyAbp, R1PathWithSurjectivity) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const Region omega = interior_region(s);
    const auto u = field_from(s, [](double x) { return -x; });
    AbpTolerances tols;
    tols.tol_dist = 0.005;
    const auto report =
        verify_abp(s, Region::of({30}), omega, u, 0.2, 0.0, 2.0, ContactKind::R1, tols);
    EXPECT_TRUE(report.r1_surjectivity);
    EXPECT_TRUE(report.satisfied);  // mass_R = mass_D = one node
    EXPECT_EQ(report.mass_R, report.mass_D);
}

TEST(VerifyAbp, HypothesisViolationWhenContactTouchesBoundary) {
    // u decreasing toward the right edge pushes the contact set onto the
    // closure boundary
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const Region omega = interior_region(s);
    const auto u = field_from(s, [](double x) { return -x; });
    try {
        verify_abp(s, Region::of({30}), omega, u, 0.1, 0.0, 2.0, ContactKind::R1Star);
        FAIL() << "r1star is not a valid verification kind";
    } catch (const std::invalid_argument&) {
    }
    try {
        verify_abp(s, Region::of({95}), omega, u, 0.3, 0.0, 2.0, ContactKind::R2);
        FAIL() << "expected a hypothesis violation";
    } catch (const HypothesisViolation& e) {
        EXPECT_EQ(e.hypothesis, "contact-set-in-omega");
    }
}

TEST(VerifyAbp, EmptyContactWithPositiveVertexMassFails) {
    // an R1 band too far from any minimizer leaves the contact set empty:
    // positive vertex mass then reports an unbounded deficiency
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const Region omega = interior_region(s);
    ScalarField u;
    u.values.assign(s.size(), 0.0);
    AbpTolerances tols;
    tols.tol_eq = 1e-12;
    tols.tol_dist = 0.004;
    // only minimizer of 0 + d_y is x = y; the band requires d(x,y) = 0.3
    const auto report =
        verify_abp(s, Region::of({50}), omega, u, 0.3, 0.0, 2.0, ContactKind::R1, tols);
    EXPECT_FALSE(report.satisfied);
    EXPECT_EQ(report.contact_size, 0u);
    EXPECT_TRUE(std::isinf(report.slack));
    EXPECT_LT(report.slack, 0.0);
}

TEST(VerifyAbp, SurjectivityViolationWithNonemptyContact) {
    // one vertex of D is served at distance t, the other is not
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const Region omega = interior_region(s);
    const auto u = field_from(s, [](double x) { return -x; });
    AbpTolerances tols;
    tols.tol_dist = 0.005;
    try {
        verify_abp(s, Region::of({30, 98}), omega, u, 0.2, 0.0, 2.0, ContactKind::R1, tols);
        FAIL() << "expected the surjectivity hypothesis to fail";
    } catch (const HypothesisViolation& e) {
        EXPECT_EQ(e.hypothesis, "r1_surjectivity");
    }
}

TEST(VerifyAbp, FlatCoefficientOrdering) {
    // (1 + tL/N)^N <= exp(tL) on every flat report
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const Region omega = node_block(2, 98);
    for (double a : {1.0, 4.0, 16.0}) {
        const auto u = field_from(s, [&](double x) { return a * (x - 0.5) * (x - 0.5); });
        const auto report =
            verify_abp(s, node_block(40, 60), omega, u, 0.1, 0.0, 3.0, ContactKind::R2);
        ASSERT_TRUE(report.has_exp_bound);
        EXPECT_LE(report.coefficient * report.mass_R, report.exp_bound * (1.0 + 1e-12));
    }
}

TEST(VerifyAbp, DeficiencyNonincreasingUnderRefinement) {
    std::vector<double> deficiency;
    for (std::size_t n : {101, 201}) {
        const auto s = DiscreteMMSpace::interval(0.0, 1.0, n);
        const Region omega = node_block(2, n - 3);
        const auto u = field_from(s, [](double x) { return 8.0 * (x - 0.5) * (x - 0.5); });
        const Region d_set = node_block(35 * (n - 1) / 100, 65 * (n - 1) / 100);
        const auto rep = verify_abp(s, d_set, omega, u, 0.1, 0.0, 2.0, ContactKind::R2);
        EXPECT_TRUE(rep.satisfied) << "n=" << n;
        deficiency.push_back(std::max(0.0, -rep.slack));
    }
    EXPECT_LE(deficiency[1], deficiency[0] + 1e-12);
}

TEST(SignedDistance, IntervalProfile) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    std::vector<PointId> ids;
    for (PointId p = 31; p <= 69; ++p) ids.push_back(p);  // strictly inside (0.3, 0.7)
    const Region omega = Region::of(ids, RegionKind::OpenDomain);
    const auto u = signed_distance(s, omega);
    EXPECT_NEAR(u.values[50], -0.2, 1e-12);
    EXPECT_NEAR(u.values[90], 0.2, s.mesh_size() + 1e-12);
    // vanishes on the discrete interface band
    EXPECT_LE(std::abs(u.values[30]), s.mesh_size() + 1e-12);
    EXPECT_LE(std::abs(u.values[31]), s.mesh_size() + 1e-12);
    EXPECT_LE(std::abs(u.values[69]), s.mesh_size() + 1e-12);
    EXPECT_LE(std::abs(u.values[70]), s.mesh_size() + 1e-12);
}

TEST(SignedDistance, OneLipschitzUpToInterfaceJump) {
    // the zero level set falls between lattice nodes, so the two-sided
    // distance jumps 2h across the interface; Lipschitz holds with one mesh
    // width of slack
    const auto s = DiscreteMMSpace::circle(100);
    std::vector<PointId> ids;
    for (PointId p = 0; p < 50; ++p) ids.push_back(p);
    const Region omega = Region::of(ids, RegionKind::OpenDomain);
    const auto u = signed_distance(s, omega);
    for (PointId x = 0; x < s.size(); ++x)
        for (PointId y = x + 1; y < s.size(); ++y)
            EXPECT_LE(std::abs(u.values[x] - u.values[y]),
                      s.dist(x, y) + s.mesh_size() + 1e-12);
}

TEST(SignedDistance, CircleSawtoothMatchesScan) {
    const auto s = DiscreteMMSpace::circle(100);
    std::vector<PointId> ids;
    for (PointId p = 0; p < 50; ++p) ids.push_back(p);
    const Region omega = Region::of(ids, RegionKind::OpenDomain);
    const auto u = signed_distance(s, omega);
    // independent exhaustive scan
    for (PointId x = 0; x < s.size(); ++x) {
        double din = std::numeric_limits<double>::infinity();
        double dout = std::numeric_limits<double>::infinity();
        for (PointId q = 0; q < s.size(); ++q) {
            if (omega.contains(q))
                din = std::min(din, s.dist(x, q));
            else
                dout = std::min(dout, s.dist(x, q));
        }
        const double expected = omega.contains(x) ? -dout : din;
        EXPECT_NEAR(u.values[x], expected, 1e-14);
    }
}

TEST(Minkowski, IntervalEndpoints) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const auto rep = minkowski_content(s, node_block(30, 70), {0.1, 0.08, 0.06, 0.04});
    EXPECT_NEAR(rep.content, 2.0, 1e-9);
    for (double r : rep.ratio) EXPECT_NEAR(r, 2.0, 1e-12);
}

TEST(Minkowski, WholeSpaceHasNoBoundary) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const auto rep = minkowski_content(s, whole_space(s), {0.1, 0.05});
    EXPECT_NEAR(rep.content, 0.0, 1e-15);
}

TEST(Minkowski, RejectsSubMeshEps) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    EXPECT_THROW(minkowski_content(s, node_block(30, 70), {0.1, 0.005}),
                 std::invalid_argument);
    EXPECT_THROW(minkowski_content(s, node_block(30, 70), {0.05, 0.1}),
                 std::invalid_argument);
}

TEST(Minkowski, DiscPerimeterCoarse) {
    // coarse-grid version of the perimeter recovery; the acceptance suite
    // runs the h = 0.01 instance
    const auto s = DiscreteMMSpace::euclidean_grid({{-0.5, 0.5}, {-0.5, 0.5}}, 0.02);
    const Region omega = disc_region(s, 0.3);
    const auto rep = minkowski_content(s, omega, {0.18, 0.16, 0.14, 0.12, 0.10});
    EXPECT_NEAR(rep.content, 2.0 * kPi * 0.3, 0.12 * 2.0 * kPi * 0.3);
}

TEST(Steiner, CircleArcFlatGrowth) {
    const auto s = DiscreteMMSpace::circle(1000);
    const double h = s.mesh_size();
    std::vector<PointId> ids;
    for (PointId p = 100; p <= 399; ++p) ids.push_back(p);
    const Region omega = Region::of(ids, RegionKind::OpenDomain);
    SteinerParams prm;
    prm.H = 0.0;
    prm.N = 2.0;
    prm.sigma_band = 40.0 * h;
    prm.exterior_r = 20.0 * h;
    prm.eps_list = {20.0 * h, 15.0 * h, 10.0 * h, 5.0 * h};
    prm.band_tol = 1e-9;
    prm.annulus_tol = 1e-9;
    const auto rep = steiner_experiment(s, omega, prm);
    EXPECT_TRUE(rep.exterior_sphere_ok);
    EXPECT_TRUE(rep.band_ok);
    EXPECT_TRUE(rep.h_in_stated_range);
    EXPECT_TRUE(rep.annulus_ok);
    EXPECT_NEAR(rep.minkowski_plus, 2.0, 1e-9);
    ASSERT_TRUE(rep.expansion_checked);
    EXPECT_TRUE(rep.expansion_ok);
    // exact lattice growth: m(Omega_eps) = m(Omega) + 2 eps on step multiples
    for (double r : rep.expansion_residual) EXPECT_LE(std::abs(r), h * (1.0 + 1e-9));
    for (std::size_t k = 1; k < rep.mass.size(); ++k)
        EXPECT_LE(rep.mass[k], rep.mass[k - 1] + 1e-15);  // decreasing eps list
}

TEST(Steiner, DiscAnnulusCoarse) {
    const auto s = DiscreteMMSpace::euclidean_grid({{-0.5, 0.5}, {-0.5, 0.5}}, 0.02);
    const double R = 0.3;
    const Region omega = disc_region(s, R);
    SteinerParams prm;
    prm.H = -1.0 / R;  // outside the stated H >= 0 range: intermediate check only
    prm.N = 2.0;
    prm.sigma_band = 0.15;
    prm.exterior_r = 0.1;
    prm.eps_list = {0.10, 0.08, 0.06, 0.04};
    prm.band_tol = 0.5;
    prm.annulus_tol = 0.04;  // lattice quantization allowance at h = 0.02
    const auto rep = steiner_experiment(s, omega, prm);
    EXPECT_TRUE(rep.exterior_sphere_ok);
    EXPECT_FALSE(rep.h_in_stated_range);
    EXPECT_FALSE(rep.expansion_checked);
    EXPECT_TRUE(rep.annulus_ok);
    // slacks track the closed-form annulus comparison pi eps^3 / R
    for (const auto& e : rep.annulus) {
        const double continuum = kPi * e.eps * e.eps * e.eps / R;
        EXPECT_NEAR(e.slack, continuum, 0.04);
    }
}

TEST(Steiner, MassMonotoneInEps) {
    const auto s = DiscreteMMSpace::circle(400);
    std::vector<PointId> ids;
    for (PointId p = 50; p <= 150; ++p) ids.push_back(p);
    const Region omega = Region::of(ids, RegionKind::OpenDomain);
    SteinerParams prm;
    prm.H = 0.0;
    prm.N = 2.0;
    prm.sigma_band = 0.3;
    prm.exterior_r = 0.2;
    prm.eps_list = {0.20, 0.13, 0.09, 0.05};
    prm.band_tol = 1e-8;
    // eps values that are not lattice multiples cost up to 2h of rounding
    prm.annulus_tol = 3.0 * s.mesh_size();
    const auto rep = steiner_experiment(s, omega, prm);
    for (std::size_t k = 1; k < rep.mass.size(); ++k) EXPECT_LE(rep.mass[k], rep.mass[k - 1]);
    EXPECT_TRUE(rep.annulus_ok);
}
