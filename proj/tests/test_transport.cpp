#include "abplab/transport.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "transport_oracle.h"

using namespace abplab;
using abplab_test::measure_on;
using abplab_test::oracle_min_cost;

TEST(SolveW2, IdentityTransport) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 11);
    const auto mu = ProbMeasure::uniform_on(s, Region::of({2, 3, 4}));
    const auto sol = solve_w2(s, mu, mu);
    EXPECT_NEAR(sol.cost, 0.0, 1e-12);
    for (const auto& e : sol.plan) EXPECT_EQ(e.from, e.to);
}

TEST(SolveW2, DiracToDirac) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 11);
    const auto mu = ProbMeasure::dirac(s, 1);
    const auto nu = ProbMeasure::dirac(s, 8);
    const auto sol = solve_w2(s, mu, nu);
    EXPECT_NEAR(sol.cost, s.dist(1, 8), 1e-12);
    ASSERT_EQ(sol.plan.size(), 1u);
    EXPECT_EQ(sol.plan[0].from, 1u);
    EXPECT_EQ(sol.plan[0].to, 8u);
}

TEST(SolveW2, ThreeByThreeMatchesEnumeration) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 3);
    const auto mu = measure_on(s, {0, 1, 2}, {0.5, 0.3, 0.2});
    const auto nu = measure_on(s, {0, 1, 2}, {0.2, 0.3, 0.5});
    const auto sol = solve_w2(s, mu, nu);
    EXPECT_NEAR(sol.cost * sol.cost, 0.15, 1e-10);

    // monotone rearrangement is the optimal plan on the line
    ASSERT_EQ(sol.plan.size(), 4u);
    EXPECT_EQ(sol.plan[0].from, 0u);
    EXPECT_EQ(sol.plan[0].to, 0u);
    EXPECT_NEAR(sol.plan[0].mass, 0.2, 1e-12);
    EXPECT_EQ(sol.plan[1].from, 0u);
    EXPECT_EQ(sol.plan[1].to, 1u);
    EXPECT_NEAR(sol.plan[1].mass, 0.3, 1e-12);
    EXPECT_EQ(sol.plan[2].from, 1u);
    EXPECT_EQ(sol.plan[2].to, 2u);
    EXPECT_NEAR(sol.plan[2].mass, 0.3, 1e-12);
    EXPECT_EQ(sol.plan[3].from, 2u);
    EXPECT_EQ(sol.plan[3].to, 2u);
    EXPECT_NEAR(sol.plan[3].mass, 0.2, 1e-12);

    std::vector<std::vector<double>> cost(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double d = s.dist(i, j);
            cost[i][j] = 0.5 * d * d;
        }
    const double oracle = oracle_min_cost(cost, {0.5, 0.3, 0.2}, {0.2, 0.3, 0.5});
    EXPECT_NEAR(sol.lp_cost, oracle, 1e-12);
}

TEST(SolveW2, RandomInstancesMatchOracle) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 21);
    std::mt19937 rng(2024);
    std::uniform_int_distribution<std::size_t> size_pick(2, 5);
    std::uniform_int_distribution<PointId> node_pick(0, 20);
    std::uniform_real_distribution<double> weight_pick(0.05, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t ns = size_pick(rng), nt = size_pick(rng);
        std::vector<PointId> xs, ys;
        while (xs.size() < ns) {
            const PointId p = node_pick(rng);
            if (std::find(xs.begin(), xs.end(), p) == xs.end()) xs.push_back(p);
        }
        while (ys.size() < nt) {
            const PointId p = node_pick(rng);
            if (std::find(ys.begin(), ys.end(), p) == ys.end()) ys.push_back(p);
        }
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        std::vector<double> wa(ns), wb(nt);
        for (auto& v : wa) v = weight_pick(rng);
        for (auto& v : wb) v = weight_pick(rng);
        const auto mu = measure_on(s, xs, wa);
        const auto nu = measure_on(s, ys, wb);
        const auto sol = solve_w2(s, mu, nu);

        std::vector<std::vector<double>> cost(ns, std::vector<double>(nt));
        std::vector<double> a(ns), b(nt);
        for (std::size_t i = 0; i < ns; ++i) a[i] = mu.w[xs[i]];
        for (std::size_t j = 0; j < nt; ++j) b[j] = nu.w[ys[j]];
        for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t j = 0; j < nt; ++j) {
                const double d = s.dist(xs[i], ys[j]);
                cost[i][j] = 0.5 * d * d;
            }
        const double oracle = oracle_min_cost(cost, a, b);
        EXPECT_NEAR(sol.lp_cost, oracle, 1e-10) << "trial " << trial;

        const auto cert = verify_optimality(s, sol.plan, sol.potential, sol.c_potential,
                                            1e-9 * (1.0 + s.diameter() * s.diameter()));
        EXPECT_TRUE(cert.pass) << "trial " << trial;
    }
}

TEST(SolveW2, PlanMarginalsMatch) {
    const auto s = DiscreteMMSpace::circle(40);
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> U(0.01, 1.0);
    std::vector<double> w0(s.size()), w1(s.size());
    double s0 = 0, s1 = 0;
    for (std::size_t p = 0; p < s.size(); ++p) {
        w0[p] = U(rng);
        w1[p] = U(rng);
        s0 += w0[p];
        s1 += w1[p];
    }
    for (std::size_t p = 0; p < s.size(); ++p) {
        w0[p] /= s0;
        w1[p] /= s1;
    }
    const auto mu = ProbMeasure::from_weights(s, w0);
    const auto nu = ProbMeasure::from_weights(s, w1);
    const auto sol = solve_w2(s, mu, nu);
    std::vector<double> row(s.size(), 0.0), col(s.size(), 0.0);
    for (const auto& e : sol.plan) {
        row[e.from] += e.mass;
        col[e.to] += e.mass;
    }
    for (PointId p = 0; p < s.size(); ++p) {
        EXPECT_NEAR(row[p], mu.w[p], 1e-10);
        EXPECT_NEAR(col[p], nu.w[p], 1e-10);
    }
}

TEST(SolveW2, DualityHolds) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 31);
    const auto mu = ProbMeasure::uniform_on(s, Region::of({0, 1, 2, 3, 4, 5}));
    const auto nu = ProbMeasure::uniform_on(s, Region::of({20, 21, 22, 25, 30}));
    const auto sol = solve_w2(s, mu, nu);
    double dual = 0.0;
    for (PointId p = 0; p < s.size(); ++p)
        dual += sol.potential[p] * mu.w[p] + sol.c_potential[p] * nu.w[p];
    EXPECT_NEAR(dual, 0.5 * sol.cost * sol.cost, 1e-9 * s.diameter() * s.diameter());
    // normalization pins phi at the lowest supported source node
    EXPECT_DOUBLE_EQ(sol.potential[0], 0.0);
    // dual constraint holds everywhere
    for (PointId x = 0; x < s.size(); ++x)
        for (PointId y = 0; y < s.size(); ++y) {
            const double d = s.dist(x, y);
            EXPECT_LE(sol.potential[x] + sol.c_potential[y], 0.5 * d * d + 1e-12);
        }
}

TEST(SolveW2, CostSymmetry) {
    const auto s = DiscreteMMSpace::circle(24);
    const auto mu = ProbMeasure::uniform_on(s, Region::of({0, 1, 2, 3}));
    const auto nu = ProbMeasure::uniform_on(s, Region::of({10, 11, 15}));
    EXPECT_NEAR(solve_w2(s, mu, nu).cost, solve_w2(s, nu, mu).cost, 1e-10);
}

TEST(SolveW2, TriangleInequalityOfW2) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 21);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> U(0.01, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> w1(s.size()), w2(s.size()), w3(s.size());
        for (std::size_t p = 0; p < s.size(); ++p) {
            w1[p] = U(rng);
            w2[p] = U(rng);
            w3[p] = U(rng);
        }
        auto norm = [&](std::vector<double>& w) {
            double sum = 0.0;
            for (double v : w) sum += v;
            for (double& v : w) v /= sum;
            return ProbMeasure::from_weights(s, w);
        };
        const auto m1 = norm(w1), m2 = norm(w2), m3 = norm(w3);
        const double d12 = solve_w2(s, m1, m2).cost;
        const double d23 = solve_w2(s, m2, m3).cost;
        const double d13 = solve_w2(s, m1, m3).cost;
        EXPECT_LE(d13, d12 + d23 + 1e-9);
    }
}

TEST(SolveW2, ErrorPaths) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 5);
    const auto mu = ProbMeasure::dirac(s, 0);
    ProbMeasure bad;  // unnormalized marginal
    bad.w.assign(s.size(), 0.0);
    bad.w[1] = 0.7;
    EXPECT_THROW(solve_w2(s, mu, bad), std::invalid_argument);
    EXPECT_THROW(ProbMeasure::from_weights(s, {0.5, 0.0, 0.0, 0.0, 0.0}),
                 std::invalid_argument);
    EXPECT_THROW(ProbMeasure::from_weights(s, {1.5, -0.5, 0.0, 0.0, 0.0}),
                 std::invalid_argument);
}

TEST(CTransform, ZeroPotential) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 21);
    const Region all = whole_space(s);
    std::vector<double> phi(s.size(), 0.0);
    std::vector<PointId> witnesses;
    const auto phic = c_transform(s, phi, all, all, &witnesses);
    for (std::size_t k = 0; k < phic.size(); ++k) {
        EXPECT_DOUBLE_EQ(phic[k], 0.0);
        EXPECT_EQ(witnesses[k], all.ids[k]);  // x = y minimizes
    }
}

TEST(CTransform, QuadraticPotentialOnInterval) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const Region all = whole_space(s);
    std::vector<double> phi(s.size());
    for (PointId p = 0; p < s.size(); ++p) {
        const double x = s.coord(p, 0);
        phi[p] = 0.5 * x * x;
    }
    std::vector<PointId> witnesses;
    const auto phic = c_transform(s, phi, all, all, &witnesses);
    for (PointId p = 0; p < s.size(); ++p) {
        const double y = s.coord(p, 0);
        EXPECT_NEAR(phic[p], 0.5 * y * y - y, 1e-12);
        if (p > 0) {
            EXPECT_EQ(witnesses[p], 100u);  // minimizer is x = 1 for y > 0
        }
    }
    EXPECT_EQ(witnesses[0], 0u);  // y = 0 ties at every x; lowest id wins
}

TEST(CTransform, TripleTransformIdempotent) {
    const auto s = DiscreteMMSpace::circle(40);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> phi(s.size());
    for (auto& v : phi) v = U(rng);
    const auto c1 = c_transform(s, phi);
    const auto c2 = c_transform(s, c1);
    const auto c3 = c_transform(s, c2);
    for (PointId p = 0; p < s.size(); ++p) EXPECT_NEAR(c3[p], c1[p], 1e-13);
}

TEST(CTransform, OrderReversing) {
    const auto s = DiscreteMMSpace::interval(0.0, 2.0, 33);
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> phi1(s.size()), phi2(s.size());
    for (PointId p = 0; p < s.size(); ++p) {
        phi1[p] = U(rng);
        phi2[p] = phi1[p] + std::abs(U(rng));  // phi2 >= phi1 pointwise
    }
    const auto c1 = c_transform(s, phi1);
    const auto c2 = c_transform(s, phi2);
    for (PointId p = 0; p < s.size(); ++p) EXPECT_GE(c1[p], c2[p]);
}

TEST(CSuperdifferential, ZeroPotentialDiagonal) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 11);
    std::vector<double> phi(s.size(), 0.0);
    const auto phic = c_transform(s, phi);
    const auto pairs = c_superdifferential(s, phi, phic, 1e-12);
    for (PointId p = 0; p < s.size(); ++p) {
        EXPECT_TRUE(std::find(pairs.begin(), pairs.end(), std::make_pair(p, p)) != pairs.end());
    }
    // every x has at least one partner
    std::vector<char> has(s.size(), 0);
    for (const auto& pr : pairs) has[pr.first] = 1;
    for (PointId p = 0; p < s.size(); ++p) EXPECT_TRUE(has[p]);
}

TEST(CSuperdifferential, ContainsPlanSupport) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 3);
    const auto mu = measure_on(s, {0, 1, 2}, {0.5, 0.3, 0.2});
    const auto nu = measure_on(s, {0, 1, 2}, {0.2, 0.3, 0.5});
    const auto sol = solve_w2(s, mu, nu);
    for (const auto& e : sol.plan) {
        EXPECT_TRUE(std::find(sol.superdiff.begin(), sol.superdiff.end(),
                              std::make_pair(e.from, e.to)) != sol.superdiff.end());
    }
}

TEST(CSuperdifferential, InconsistentPairRejected) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 11);
    std::vector<double> phi(s.size(), 0.0);
    std::vector<double> bogus(s.size(), -3.0);
    EXPECT_THROW(c_superdifferential(s, phi, bogus, 1e-9), std::invalid_argument);
}

TEST(VerifyOptimality, RejectsAntidiagonalSwap) {
    // swapping two equal diracs is strictly worse than staying put
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 2);
    std::vector<PlanEntry> swap_plan = {{0, 1, 0.5}, {1, 0, 0.5}};
    std::vector<double> phi(s.size(), 0.0), phic(s.size(), 0.0);
    const auto report = verify_optimality(s, swap_plan, phi, phic, 1e-9);
    EXPECT_FALSE(report.pass);
    EXPECT_EQ(report.violations.size(), 2u);
}

TEST(VerifyOptimality, AcceptsDiracPlan) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 2);
    std::vector<PlanEntry> plan = {{0, 0, 0.5}, {1, 1, 0.5}};
    std::vector<double> phi(s.size(), 0.0), phic(s.size(), 0.0);
    EXPECT_TRUE(verify_optimality(s, plan, phi, phic, 1e-9).pass);
}

TEST(Displacement, EndpointsExact) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const auto mu = ProbMeasure::uniform_on(s, Region::of({10, 11, 12}));
    const auto nu = ProbMeasure::uniform_on(s, Region::of({60, 61, 62}));
    const auto sol = solve_w2(s, mu, nu);
    EXPECT_EQ(displacement_interpolate(s, sol, 0.0).w, mu.w);
    EXPECT_EQ(displacement_interpolate(s, sol, 1.0).w, nu.w);
}

TEST(Displacement, MidpointOfDiracs) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 101);
    const auto sol = solve_w2(s, ProbMeasure::dirac(s, 0), ProbMeasure::dirac(s, 100));
    const auto mid = displacement_interpolate(s, sol, 0.5);
    EXPECT_DOUBLE_EQ(mid.w[50], 1.0);
}

TEST(Displacement, MassConservation) {
    const auto s = DiscreteMMSpace::circle(60);
    const auto mu = ProbMeasure::uniform_on(s, Region::of({0, 1, 2, 3, 4}));
    const auto nu = ProbMeasure::uniform_on(s, Region::of({30, 31, 32}));
    const auto sol = solve_w2(s, mu, nu);
    for (double t : {0.1, 0.25, 0.5, 0.83}) {
        const auto mt = displacement_interpolate(s, sol, t);
        double sum = 0.0;
        for (double v : mt.w) sum += v;
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Displacement, RequiresGeoOracle) {
    std::vector<std::vector<double>> d = {{0, 1}, {1, 0}};
    const auto s = DiscreteMMSpace::from_data(d, {1, 1}, {});
    TransportSolution sol;
    sol.plan = {{0, 1, 1.0}};
    sol.mu_weights = {1.0, 0.0};
    sol.nu_weights = {0.0, 1.0};
    EXPECT_THROW(displacement_interpolate(s, sol, 0.5), std::invalid_argument);
}

TEST(Displacement, MatchesAtomPushingOracle) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 3);
    const auto mu = measure_on(s, {0, 1, 2}, {0.5, 0.3, 0.2});
    const auto nu = measure_on(s, {0, 1, 2}, {0.2, 0.3, 0.5});
    const auto sol = solve_w2(s, mu, nu);
    const auto mid = displacement_interpolate(s, sol, 0.5);
    // expected atoms from the monotone plan: 0.2@0, 0.3@geo(0,1,.5),
    // 0.3@geo(1,2,.5), 0.2@2
    std::vector<double> expect(3, 0.0);
    expect[0] += 0.2;
    expect[s.geo(0, 1, 0.5)] += 0.3;
    expect[s.geo(1, 2, 0.5)] += 0.3;
    expect[2] += 0.2;
    for (PointId p = 0; p < 3; ++p) EXPECT_NEAR(mid.w[p], expect[p], 1e-12);
}

TEST(EnumerateOptimalPlans, FindsAllVerticesOfTies) {
    // two sources, two sinks, symmetric instance: both matchings optimal
    const auto s = DiscreteMMSpace::circle(4);
    const auto mu = measure_on(s, {0, 2}, {0.5, 0.5});
    const auto nu = measure_on(s, {1, 3}, {0.5, 0.5});
    const auto plans = enumerate_optimal_plans(s, mu, nu, 1e-10);
    EXPECT_GE(plans.size(), 2u);
}

TEST(EntropicCrossCheck, NearExactCost) {
    const auto s = DiscreteMMSpace::interval(0.0, 1.0, 21);
    const auto mu = ProbMeasure::uniform_on(s, Region::of({0, 1, 2, 3, 4}));
    const auto nu = ProbMeasure::uniform_on(s, Region::of({15, 16, 17, 18, 19, 20}));
    const auto sol = solve_w2(s, mu, nu);
    const double approx = entropic_w2(s, mu, nu, 2e-3, 4000);
    EXPECT_NEAR(approx, sol.cost, 0.05 * std::max(sol.cost, 0.1));
}
