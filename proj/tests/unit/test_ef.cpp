#include <gtest/gtest.h>

#include <cmath>

#include "entrank/ef_optimizer.hpp"
#include "entrank/error.hpp"
#include "support.hpp"

using namespace entrank;
using namespace entrank::testing;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no entrank::Error thrown";
    return ErrorKind::InvalidState;
}

BipartiteState bell_mixture() {
    const double r = 1 / std::sqrt(2.0);
    const std::vector<WeightedPure> c{{0.5, two_qubit(r, 0, 0, r)}, {0.5, two_qubit(r, 0, 0, -r)}};
    return mix(c);
}

void expect_valid(const Ensemble& e, const BipartiteState& rho) {
    EXPECT_NEAR(e.weight_sum(), 1.0, 1e-10);
    EXPECT_LE(e.reconstruction_error(), 1e-10);
    EXPECT_LE(max_abs_diff(e.realized_state.rho(), rho.rho()), 1e-10);
    for (const auto& m : e.members) {
        EXPECT_GT(m.weight, 0.0);
        EXPECT_NEAR(norm(m.psi.amplitudes()), 1.0, 1e-12);
    }
}

}  // namespace

TEST(Ensemble, IdentityIsometryGivesEigenEnsemble) {
    const BipartiteState s = random_state({2, 3}, 3, 4);
    const Ensemble e = ensemble_from_isometry(s, ComplexMatrix::identity(3));
    ASSERT_EQ(e.members.size(), 3u);
    const auto eig = hermitian_eig(s.rho());
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(e.members[i].weight, eig.values[i], 1e-14);
        EXPECT_NEAR(std::norm(inner(e.members[i].psi.amplitudes(), eig.vector(i))), 1.0, 1e-12);
    }
    expect_valid(e, s);
}

TEST(Ensemble, PureStateHasSingleMember) {
    const BipartiteState s = BipartiteState::pure(bell());
    Random rng(1);
    const Ensemble e = ensemble_from_isometry(s, rng.isometry(4, 1));
    ASSERT_EQ(e.members.size(), 4u);
    double total = 0;
    for (const auto& m : e.members) {
        total += m.weight;
        EXPECT_NEAR(std::norm(inner(m.psi.amplitudes(), bell().amplitudes())), 1.0, 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_NEAR(e.average_entanglement(), 1.0, 1e-12);
}

TEST(Ensemble, BellMixtureEigenbasisIsProduct) {
    const Ensemble e = ensemble_from_isometry(bell_mixture(), ComplexMatrix::identity(2));
    EXPECT_NEAR(e.average_entanglement(), 0.0, 1e-14);
}

TEST(Ensemble, ErrorPaths) {
    const BipartiteState s = random_state({2, 2}, 2, 1);
    EXPECT_EQ(kind_of([&] { ensemble_from_isometry(s, ComplexMatrix(3, 2)); }), ErrorKind::NotIsometry);
    EXPECT_EQ(kind_of([&] { ensemble_from_isometry(s, ComplexMatrix::identity(3)); }), ErrorKind::DimensionMismatch);
}

TEST(EnsembleProperty, RandomIsometriesReconstructState) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Dims d = dims_from(seed, 3);
        const std::size_t r = 1 + seed % d.total();
        const BipartiteState s = random_state(d, r, seed);
        Random rng(seed + 5);
        expect_valid(ensemble_from_isometry(s, rng.isometry(r + seed % 4, r)), s);
    }
}

TEST(Ef, BellIsOneBit) {
    const EfResult r = ef_minimize(BipartiteState::pure(bell()), 0, 20, 0);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_EQ(r.k, 1u);
}

TEST(Ef, SeparableFixtures) {
    EXPECT_LE(ef_minimize(bell_mixture(), 0, 20, 1).value, 1e-4);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const BipartiteState s = random_separable({2, 2}, 2 + seed % 2, seed);
        EXPECT_LE(ef_minimize(s, 0, 20, seed).value, 1e-4) << "seed " << seed;
    }
}

TEST(Ef, ErrorPaths) {
    const BipartiteState s = random_state({2, 2}, 3, 2);
    EXPECT_EQ(kind_of([&] { ef_minimize(s, 2, 1, 0); }), ErrorKind::KTooSmall);
    EfOptions o;
    o.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    EXPECT_EQ(kind_of([&] { ef_minimize(s, o); }), ErrorKind::BudgetExceeded);
    EXPECT_EQ(kind_of([] { ef_oracle_2q(tiles_fixture()); }), ErrorKind::DimensionNotTwoByTwo);
}

TEST(EfProperty, ResultIsVerifiedEnsembleBelowEigenEnsemble) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Dims d = dims_from(seed, 3);
        const BipartiteState s = random_state(d, 2 + seed % 2, seed);
        const EfResult r = ef_minimize(s, 0, 3, seed);
        expect_valid(r.best_ensemble, s);
        EXPECT_NEAR(r.value, r.best_ensemble.average_entanglement(), 1e-12);
        const double eigen = ensemble_from_isometry(s, ComplexMatrix::identity(numerical_rank(s.rho())))
                                 .average_entanglement();
        EXPECT_LE(r.value, eigen + 1e-12);
    }
}

TEST(EfProperty, OracleAgreementSmallSample) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const BipartiteState s = random_state({2, 2}, 1 + seed % 4, seed);
        const double oracle = oracle_ef_2q(s.rho());
        // Square roots of rounding-level eigenvalues limit both closed forms to ~1e-8 at low rank.
        EXPECT_NEAR(ef_oracle_2q(s), oracle, 1e-7);
        EXPECT_NEAR(ef_minimize(s, 4, 20, seed).value, oracle, 1e-3) << "seed " << seed;
    }
}

TEST(EfProperty, LocalUnitaryInvariance) {
    const BipartiteState s = random_state({2, 3}, 2, 17);
    const double base = ef_minimize(s, 0, 20, 3).value;
    for (std::uint64_t i = 0; i < 20; ++i) {
        Random rng(derive_seed(99, i));
        const BipartiteState r = locally_rotated(s, rng.unitary(2), rng.unitary(3));
        EXPECT_NEAR(ef_minimize(r, 0, 20, 3).value, base, 2e-3) << "rotation " << i;
    }
}

TEST(EfProperty, MonotoneInEnsembleSize) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const BipartiteState s = random_state({2, 2}, 2, seed + 40);
        EfOptions o;
        o.restarts = 5;
        o.seed = seed;
        std::optional<EfResult> prev;
        for (std::size_t k = 2; k <= 6; ++k) {
            o.k = k;
            o.warm_starts.clear();
            if (prev) {
                // Previous optimum padded with a zero row: same ensemble, one more slot.
                ComplexMatrix v(k, prev->best_isometry.cols());
                for (std::size_t i = 0; i < prev->best_isometry.rows(); ++i)
                    for (std::size_t j = 0; j < v.cols(); ++j) v(i, j) = prev->best_isometry(i, j);
                o.warm_starts.push_back(v);
            }
            const EfResult r = ef_minimize(s, o);
            if (prev) EXPECT_LE(r.value, prev->value + 1e-8) << "k " << k;
            prev.emplace(r);
        }
    }
}

TEST(EfProperty, SameSeedSameResult) {
    const BipartiteState s = random_state({3, 2}, 3, 5);
    const EfResult a = ef_minimize(s, 0, 4, 11);
    const EfResult b = ef_minimize(s, 0, 4, 11);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.per_restart_values, b.per_restart_values);
    EXPECT_EQ(a.best_isometry, b.best_isometry);
}

TEST(Concurrence, KnownValues) {
    EXPECT_NEAR(concurrence_2q(BipartiteState::pure(bell())), 1.0, 1e-12);
    EXPECT_NEAR(concurrence_2q(bell_mixture()), 0.0, 1e-12);
    // Werner state F = 3/4: C = 2F - 1 = 1/2.
    ComplexMatrix w = BipartiteState::pure(bell()).rho() * (2.0 / 3) + ComplexMatrix::identity(4) * (1.0 / 12);
    EXPECT_NEAR(concurrence_2q(BipartiteState({2, 2}, w)), 0.5, 1e-12);
    EXPECT_NEAR(ef_oracle_2q(BipartiteState({2, 2}, w)), binary_entropy(0.5 + std::sqrt(0.75) / 2), 1e-12);
}

TEST(TensorPower, RegroupsParties) {
    const BipartiteState b = BipartiteState::pure(bell());
    const BipartiteState t = tensor_power(b, 2);
    EXPECT_EQ(t.dims(), (Dims{4, 4}));
    // Phi+ (x) Phi+ regrouped is the maximally entangled state of two ququarts.
    EXPECT_LE(max_abs_diff(t.rho(), BipartiteState::pure(maximally_entangled(4)).rho()), 1e-15);
    const BipartiteState s = random_state({2, 3}, 2, 1);
    const BipartiteState s2 = tensor_power(s, 2);
    EXPECT_EQ(s2.dims(), (Dims{4, 9}));
    // Marginals factorize across copies.
    EXPECT_LE(max_abs_diff(s2.marginal(Party::A), tensor(s.marginal(Party::A), s.marginal(Party::A))), 1e-14);
    EXPECT_LE(max_abs_diff(s2.marginal(Party::B), tensor(s.marginal(Party::B), s.marginal(Party::B))), 1e-14);
    EXPECT_EQ(tensor_power(s, 1).rho(), s.rho());
}

TEST(Additivity, BellAndSeparable) {
    const AdditivityTable t = additivity_explore(BipartiteState::pure(bell()), 3, {});
    ASSERT_EQ(t.rows.size(), 3u);
    for (const auto& row : t.rows) EXPECT_NEAR(row.per_copy, 1.0, 1e-6);
    EXPECT_FALSE(t.subadditivity_evidence);
    const AdditivityTable z = additivity_explore(bell_mixture(), 2, {}, {5, 0, 16});
    for (const auto& row : z.rows) EXPECT_NEAR(row.per_copy, 0.0, 1e-4);
    EXPECT_LE(z.rows.back().k, 16u);
}

TEST(Additivity, CapAndBudget) {
    EXPECT_EQ(kind_of([] { additivity_explore(tiles_fixture(), 3, {}); }), ErrorKind::CapExceeded);
    const AdditivityTable t =
        additivity_explore(random_state({2, 2}, 2, 3), 2, TimeBudget{std::chrono::milliseconds(0)});
    EXPECT_TRUE(t.budget_exceeded);
    EXPECT_LT(t.rows.size(), 2u);
}
