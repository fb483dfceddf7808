#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gapsolve/form_identities.hpp"

using namespace gapsolve;

namespace {

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }

BlockOperator analytic_1x1() {
    return BlockOperator::with_identity_overlaps(SymMatrix(m1(1.0)), m1(1.0),
                                                 SymMatrix(m1(-1.0)));
}

BlockOperator random_blocks(Index np, Index nm, std::mt19937_64& rng, bool identity_overlaps,
                            double amm_shift) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto rand_mat = [&](Index r, Index c) {
        Matrix m(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j) m(i, j) = u(rng);
        return m;
    };
    Matrix app = rand_mat(np, np);
    app = 0.5 * (app + app.transpose()).eval();
    Matrix amm = rand_mat(nm, nm);
    amm = (0.5 * (amm + amm.transpose()) - amm_shift * Matrix::Identity(nm, nm)).eval();
    Matrix apm = rand_mat(np, nm);
    if (identity_overlaps)
        return BlockOperator::with_identity_overlaps(SymMatrix(app), apm, SymMatrix(amm));
    Matrix gp = rand_mat(np, np);
    Matrix gm = rand_mat(nm, nm);
    SymMatrix sp(gp.transpose() * gp + double(np) * Matrix::Identity(np, np));
    SymMatrix sm(gm.transpose() * gm + double(nm) * Matrix::Identity(nm, nm));
    return BlockOperator(SymMatrix(app), apm, SymMatrix(amm), sp, sm);
}

}  // namespace

TEST_CASE("concave decomposition is exact") {
    const BlockOperator op = analytic_1x1();
    CHECK(decomposition_residual(op, 1.0, 50) <= 1e-13);
    CHECK(decomposition_residual(op, 0.2, 50) <= 1e-13);

    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        const BlockOperator rop = random_blocks(1 + Index(rng() % 6), 1 + Index(rng() % 6),
                                                rng, (rep % 2) == 0, 2.0);
        const double E = lambda0(rop) + 0.3 + 0.01 * rep;
        CHECK(decomposition_residual(rop, E, 25) <= 1e-10 * scale(rop));
    }
}

TEST_CASE("decomposition special slices") {
    // y- = L x+ collapses b_E(0) = 0; x+ = 0 leaves only -b_E(y-)
    std::mt19937_64 rng(7);
    const BlockOperator op = random_blocks(3, 2, rng, true, 2.0);
    const double E = lambda0(op) + 1.0;
    const SchurPair p = schur_pair(op, E);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector xp(3);
    for (Index i = 0; i < 3; ++i) xp(i) = u(rng);

    const Vector ym = p.L * xp;
    const double quad = xp.dot((op.App.mat() - E * Matrix::Identity(3, 3)) * xp) +
                        2.0 * xp.dot(op.Apm * ym) +
                        ym.dot((op.Amm.mat() - E * Matrix::Identity(2, 2)) * ym);
    CHECK(quad == Catch::Approx(xp.dot(p.M.mat() * xp)).margin(1e-12));

    Vector ym2(2);
    for (Index i = 0; i < 2; ++i) ym2(i) = u(rng);
    const double quad2 = ym2.dot((op.Amm.mat() - E * Matrix::Identity(2, 2)) * ym2);
    const double be = ym2.dot((E * Matrix::Identity(2, 2) - op.Amm.mat()) * ym2);
    CHECK(quad2 == Catch::Approx(-be).margin(1e-13));
}

TEST_CASE("graph map resolvent identity") {
    const BlockOperator op = analytic_1x1();
    // scalar check: 1/3 = 1/2 + (1-2)*(1/3)*(1/2)
    CHECK(graph_map_identity_residual(op, 1.0, 2.0) <= 1e-14);
    CHECK(graph_map_identity_residual(op, 1.3, 1.3) <= 1e-15);

    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 15; ++rep) {
        const BlockOperator rop = random_blocks(5, 5, rng, (rep % 2) == 0, 2.0);
        CHECK(graph_map_identity_residual(rop, 0.3, 0.9) <= 1e-11 * scale(rop));
    }
}

TEST_CASE("resolvent formula on the 1x1 instance") {
    const BlockOperator op = analytic_1x1();
    CHECK(resolvent_formula_residual(op, 1.0) <= 1e-12);
    // E = sqrt(2) is the pencil eigenvalue
    CHECK_THROWS_AS(resolvent_formula_residual(op, std::sqrt(2.0)), SingularShift);
}

TEST_CASE("resolvent formula reduces to block inverses when decoupled") {
    Matrix app(2, 2);
    app << 2, 0, 0, 3;
    const BlockOperator op = BlockOperator::with_identity_overlaps(
        SymMatrix(app), Matrix::Zero(2, 1), SymMatrix(m1(-1.0)));
    CHECK(resolvent_formula_residual(op, 0.5) <= 1e-13);
}

TEST_CASE("resolvent formula on random orthonormalized blocks") {
    std::mt19937_64 rng(2718);
    int done = 0;
    while (done < 15) {
        const BlockOperator rop =
            orthonormalize(random_blocks(4, 3, rng, false, 2.0));
        const double lam0 = lambda0(rop);
        const double E = lam0 + 0.4;
        // skip shifts that happen to sit on a pencil eigenvalue
        const Vector evs = full_pencil_eigenvalues(rop);
        bool clear = true;
        for (Index i = 0; i < evs.size(); ++i)
            if (std::abs(evs(i) - E) < 1e-3) clear = false;
        if (!clear) continue;
        CHECK(resolvent_formula_residual(rop, E) <= 1e-9 * scale(rop));
        ++done;
    }
}

TEST_CASE("resolvent formula demands orthonormal coordinates") {
    const BlockOperator op(SymMatrix(m1(1.0)), m1(1.0), SymMatrix(m1(-1.0)),
                           SymMatrix(m1(2.0)), SymMatrix(m1(1.0)));
    CHECK_THROWS_AS(resolvent_formula_residual(op, 1.0), InvalidConfig);
}

TEST_CASE("graph norm and level comparison inequalities") {
    // (ineqq1): ||x + L_E' x|| <= ||x + L_E x|| <= (E'-l0)/(E-l0) ||x + L_E' x||
    // (ineqq2): (E'-E)||x+L_E' x||^2 <= q_E(x) - q_E'(x) <= (E'-E)||x+L_E x||^2
    std::mt19937_64 rng(161803);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        const Index np = 1 + Index(rng() % 8);
        const Index nm = 1 + Index(rng() % 8);
        const BlockOperator op = random_blocks(np, nm, rng, (rep % 2) == 0, 2.0);
        const double sc = scale(op);
        const double tol = 1e-9 * sc;
        const double lam0 = lambda0(op);
        const double E = lam0 + 0.2 + 0.5 * (u(rng) + 1.0);
        const double Ep = E + 0.1 + 0.4 * (u(rng) + 1.0);
        const SchurPair pe = schur_pair(op, E);
        const SchurPair pep = schur_pair(op, Ep);
        for (int v = 0; v < 5; ++v) {
            Vector xp(np);
            for (Index i = 0; i < np; ++i) xp(i) = u(rng);
            const double ne = std::sqrt(xp.dot(pe.N.mat() * xp));
            const double nep = std::sqrt(xp.dot(pep.N.mat() * xp));
            CHECK(nep <= ne + tol);
            CHECK(ne <= (Ep - lam0) / (E - lam0) * nep + tol);
            const double qe = xp.dot(pe.M.mat() * xp);
            const double qep = xp.dot(pep.M.mat() * xp);
            CHECK((Ep - E) * nep * nep <= qe - qep + tol);
            CHECK(qe - qep <= (Ep - E) * ne * ne + tol);
        }
    }
}

TEST_CASE("level bounds above and below") {
    // l_k(x) <= lambda_k - x and, for lambda_k > lambda0,
    // l_k(x) >= (lambda_k - x) ((x - lambda0)/(lambda_k - lambda0))^2
    std::mt19937_64 rng(1414213);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        const Index np = 1 + Index(rng() % 5);
        const Index nm = 1 + Index(rng() % 5);
        const BlockOperator op = random_blocks(np, nm, rng, true, 2.0);
        const double sc = scale(op);
        const double tol = 1e-9 * sc;
        const double lam0 = lambda0(op);
        const Vector pencil = full_pencil_eigenvalues(op);
        const double x = lam0 + 0.1 + 0.8 * (u(rng) + 1.0);
        const Vector ells = all_levels(op, x);
        for (Index k = 1; k <= np; ++k) {
            const double lam_k = std::max(lam0, pencil(nm + k - 1));
            CHECK(ells(k - 1) <= lam_k - x + tol);
            if (lam_k > lam0 + 1e-9) {
                const double ratio = (x - lam0) / (lam_k - lam0);
                CHECK(ells(k - 1) >= (lam_k - x) * ratio * ratio - tol);
            }
        }
    }
}
