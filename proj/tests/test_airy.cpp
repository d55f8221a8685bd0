#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mmtool/airy.hpp"
#include "mmtool/detcorr.hpp"

using namespace mmtool;

TEST_CASE("airy reference values and wronskian") {
    // Ai(0) = 3^(-2/3)/Gamma(2/3)
    AiryValues a0 = airy_eval(0.0);
    CHECK(std::fabs(a0.Ai - 0.35502805388781723926) < 1e-14);
    CHECK(std::fabs(a0.Aip + 0.25881940379280679841) < 1e-14);
    CHECK(std::fabs(a0.Bi - 0.61492662744600073515) < 1e-13);

    for (double X : {-3.0, 0.0, 3.0}) {
        CHECK(airy_wronskian_deviation(X) < 1e-12);
    }
    // whole supported range
    for (double X = -12.0; X <= 12.0; X += 0.25) {
        CHECK(airy_wronskian_deviation(X) < 1e-10);
    }
    // decay on the positive side
    double prev = airy_eval(1.0).Ai;
    for (double X = 1.5; X <= 12.0; X += 0.5) {
        double cur = airy_eval(X).Ai;
        CHECK(cur > 0);
        CHECK(cur < prev);
        prev = cur;
    }
    // series/asymptotic overlap agreement near the crossover
    for (double X : {8.9, 9.1, -8.9, -9.1}) {
        AiryValues v = airy_eval(X);
        CHECK(std::isfinite(v.Ai));
        CHECK(airy_wronskian_deviation(X) < 1e-10);
    }
    CHECK_THROWS_AS(airy_eval(13.0), std::domain_error);
}

TEST_CASE("ba matrix") {
    // det Psi = 1 everywhere evaluated
    for (double x : {-2.0, 0.5, 1.7}) {
        for (double t : {-1.0, 0.0, 1.0}) {
            for (double N : {1.0, 2.0}) {
                BAMatrix m = ba_matrix(x, t, N);
                CHECK(std::fabs(m.det() - 1.0) < 1e-10);
            }
        }
    }
    // Schroedinger equation (1/N^2) psi_tt = (x+2u) psi with u = -t/2, by
    // central finite differences in t
    double x = 0.5, t = 0.0, N = 2.0, h = 1e-4;
    auto psi = [&](double tt) { return ba_matrix(x, tt, N).psi; };
    double ddpsi = (psi(t + h) - 2 * psi(t) + psi(t - h)) / (h * h);
    double resid = ddpsi / (N * N) - (x - t) * psi(t);
    CHECK(std::fabs(resid) < 1e-8);
    // translation structure psi(x+h, t+h) = psi(x,t)
    BAMatrix m1 = ba_matrix(0.3, 0.1, 1.0), m2 = ba_matrix(0.5, 0.3, 1.0);
    CHECK(std::fabs(m1.psi - m2.psi) < 1e-14);
}

TEST_CASE("kernel structure") {
    double t = 0.0, N = 1.0;
    // (x1-x2) K -> kappa det Psi = 2/N as x2 -> x1: normalized CD structure
    double x = 0.4;
    for (double eps : {1e-3, 1e-4}) {
        KernelSample k = kernel(x, x + eps, t, N);
        CHECK(std::fabs(eps * -(k.K) - 2.0 / N) < 5 * eps);  // first-order in eps
    }
    // finite and smooth off the diagonal
    for (double x1 = -1.5; x1 <= 1.5; x1 += 0.5)
        for (double x2 = -1.3; x2 <= 1.7; x2 += 0.5)
            if (x1 != x2) CHECK(std::isfinite(kernel(x1, x2, t, N).K));
    CHECK_THROWS_AS(kernel(0.3, 0.3, t, N), std::domain_error);
}

TEST_CASE("correlators") {
    double t = 0.2, N = 1.0;
    // W3 equals the two-cycle sum
    double x1 = -0.7, x2 = 0.3, x3 = 1.1;
    double k12 = kernel(x1, x2, t, N).K, k23 = kernel(x2, x3, t, N).K, k31 = kernel(x3, x1, t, N).K;
    double k13 = kernel(x1, x3, t, N).K, k32 = kernel(x3, x2, t, N).K, k21 = kernel(x2, x1, t, N).K;
    CHECK(std::fabs(w3(x1, x2, x3, t, N) - (k12 * k23 * k31 + k13 * k32 * k21)) < 1e-12);
    // symmetry under permutations
    CHECK(std::fabs(w3(x1, x2, x3, t, N) - w3(x3, x1, x2, t, N)) < 1e-12);
    CHECK(std::fabs(w2(x1, x2, t, N) - w2(x2, x1, t, N)) < 1e-12);
    // non-connected 2-point = W2 + W1 W1
    double nc = correlators({x1, x2}, t, N, false)[0];
    CHECK(std::fabs(nc - (w2(x1, x2, t, N) + w1(x1, t, N) * w1(x2, t, N))) < 1e-12);
    // coincident-point guard
    CHECK_THROWS_AS(correlators({x1, x1}, t, N, true), std::domain_error);
    // W2 diagonal limit agrees with the off-diagonal limit
    double lim = w2(x1, x1 + 1e-5, t, N);
    CHECK(std::fabs(lim - w2_diagonal(x1, t, N)) < 1e-4);
}

TEST_CASE("loop equations at finite N") {
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(-2.0 + 4.0 * i / 19.0);
    for (double t : {-1.0, 0.0, 1.0}) {
        for (double N : {1.0, 2.0}) {
            LoopCheckReport r0 = loop_check(0, grid, t, N);
            CHECK(r0.max_residual_P0 < 1e-8);
            CHECK(r0.wronskian_dev < 1e-10);
            LoopCheckReport r1 = loop_check(1, grid, t, N);
            CHECK(r1.max_residual_P1 < 1e-7);
        }
    }
}
