// Copyright 2026 The qmask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qmask/tensorcore.hpp"

namespace qmask {
namespace {

const double kHalf = 0.5;
const double kRoot2 = 1.0 / std::sqrt(2.0);

StateVector bell_plus() { return StateVector({2, 2}, {kRoot2, 0.0, 0.0, kRoot2}); }

StateVector random_state_on(const Dims& dims, std::mt19937_64& rng) {
    return StateVector(dims, oracle::random_amps(total_dim(dims), rng));
}

TEST(StateVector, RejectsMismatchedLength) {
    EXPECT_THROW(StateVector({2, 3}, std::vector<cplx>(5)), ShapeError);
    EXPECT_THROW(StateVector({1, 3}, std::vector<cplx>(3)), ShapeError);
    EXPECT_THROW(StateVector({}, {}), ShapeError);
}

TEST(StateVector, BasisIsBigEndian) {
    const auto s = StateVector::basis({2, 3}, {1, 2});
    EXPECT_EQ(s[1 * 3 + 2], cplx(1.0));
    EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
    EXPECT_THROW(StateVector::basis({2, 3}, {2, 0}), ArgumentError);
}

TEST(TensorProduct, BasisStates) {
    const auto out = tensor_product(StateVector::basis({2}, {0}), StateVector::basis({2}, {0}));
    EXPECT_EQ(out.dims(), (Dims{2, 2}));
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(out[0], cplx(1.0));
    EXPECT_EQ(out[1], cplx(0.0));
    EXPECT_EQ(out[2], cplx(0.0));
    EXPECT_EQ(out[3], cplx(0.0));
}

TEST(TensorProduct, BellPairIsTheFirstFourQubitImage) {
    // 1/2 (|00> + |11>) (x) (|00> + |11>)
    const auto out = tensor_product(bell_plus(), bell_plus());
    EXPECT_EQ(out.dims(), (Dims{2, 2, 2, 2}));
    for (std::size_t i = 0; i < 16; ++i) {
        const bool on = i == 0b0000 || i == 0b0011 || i == 0b1100 || i == 0b1111;
        EXPECT_NEAR(std::abs(out[i] - cplx(on ? kHalf : 0.0)), 0.0, 1e-15) << i;
    }
}

TEST(TensorProduct, NormIsMultiplicative) {
    std::mt19937_64 rng(7);
    const StateVector a = random_state_on({3, 2}, rng).scaled(1.7);
    const StateVector b = random_state_on({4}, rng).scaled(cplx(0.3, -0.4));
    const auto ab = tensor_product(a, b);
    EXPECT_NEAR(inner_product(ab, ab).real(),
                inner_product(a, a).real() * inner_product(b, b).real(), 1e-12);
}

TEST(InnerProduct, OrthogonalBasisStates) {
    EXPECT_EQ(inner_product(StateVector::basis({2}, {0}), StateVector::basis({2}, {1})), cplx(0.0));
}

TEST(InnerProduct, TwoQuditBasisElementsAreOrthogonal) {
    const StateVector p0({3, 3}, oracle::two_qudit_element(3, 0));
    const StateVector p1({3, 3}, oracle::two_qudit_element(3, 1));
    EXPECT_LT(std::abs(inner_product(p0, p1)), 1e-15);
}

TEST(InnerProduct, NormalizedSelfOverlapIsOne) {
    std::mt19937_64 rng(3);
    const auto s = random_state_on({2, 3, 2}, rng);
    EXPECT_NEAR(std::abs(inner_product(s, s) - 1.0), 0.0, 1e-12);
}

TEST(InnerProduct, ConjugateSymmetric) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_state_on({3, 3}, rng);
        const auto b = random_state_on({3, 3}, rng);
        EXPECT_LT(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 1e-15);
    }
}

TEST(InnerProduct, DimsMismatchThrows) {
    EXPECT_THROW(inner_product(StateVector::basis({4}, {0}), StateVector::basis({2, 2}, {0, 0})),
                 ShapeError);
}

TEST(DensityOf, BasisAndPlus) {
    const auto rho0 = density_of(StateVector::basis({2}, {0}));
    EXPECT_EQ(rho0(0, 0), cplx(1.0));
    EXPECT_EQ(rho0(0, 1), cplx(0.0));
    EXPECT_EQ(rho0(1, 1), cplx(0.0));

    const auto plus = density_of(StateVector({2}, {kRoot2, kRoot2}));
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            EXPECT_NEAR(std::abs(plus(r, c) - kHalf), 0.0, 1e-15);
        }
    }
}

TEST(DensityOf, PureStatesHaveUnitPurity) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rho = density_of(random_state_on({2, 3}, rng));
        EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
        EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-12);
        EXPECT_LE(rho.hermiticity_error(), 1e-12);
        EXPECT_GE(rho.min_eigenvalue(), -kPsdSlack);
    }
}

TEST(PartialTrace, FourQubitMaskedStateIsMaximallyMixed) {
    const auto s = tensor_product(bell_plus(), bell_plus());
    const auto rho = partial_trace(s, PartySet{0});
    EXPECT_LE(distance_to_maximally_mixed(rho), 1e-15);
}

TEST(PartialTrace, AfterFirstControlledNot) {
    // (a0|000> + a1|101> + a2|010> + a3|111>)|0>: party 0 is
    // diag(|a0|^2 + |a2|^2, |a1|^2 + |a3|^2).
    const oracle::Amps a = {cplx(0.1, 0.2), cplx(-0.3, 0.4), cplx(0.5, 0.0), cplx(0.2, -0.1)};
    const StateVector s = StateVector({2, 2, 2, 2}, oracle::qubit_after_step(1, a)).normalized();
    const double n2 = std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]) + std::norm(a[3]);
    const auto rho = partial_trace(s, PartySet{0});
    EXPECT_NEAR(rho(0, 0).real(), (std::norm(a[0]) + std::norm(a[2])) / n2, 1e-14);
    EXPECT_NEAR(rho(1, 1).real(), (std::norm(a[1]) + std::norm(a[3])) / n2, 1e-14);
    EXPECT_LT(std::abs(rho(0, 1)), 1e-15);
}

TEST(PartialTrace, TwoQubitEncodedSecondParty) {
    // a0|00> + a1|10> + a2|01> + a3|11>: party 1 has off-diagonal a0 a2* + a1 a3*.
    const oracle::Amps a = {cplx(0.4, 0.1), cplx(0.2, -0.3), cplx(-0.5, 0.2), cplx(0.3, 0.55)};
    std::vector<cplx> amps = {a[0], a[2], a[1], a[3]};
    const StateVector s({2, 2}, amps);
    const auto rho = partial_trace(s, PartySet{1});
    EXPECT_LT(std::abs(rho(0, 1) - (a[0] * std::conj(a[2]) + a[1] * std::conj(a[3]))), 1e-15);
    EXPECT_NEAR(rho(0, 0).real(), std::norm(a[0]) + std::norm(a[1]), 1e-15);
    EXPECT_NEAR(rho(1, 1).real(), std::norm(a[2]) + std::norm(a[3]), 1e-15);
}

TEST(PartialTrace, EmptyKeepThrows) {
    EXPECT_THROW(partial_trace(bell_plus(), PartySet{}), ArgumentError);
    EXPECT_THROW(partial_trace(bell_plus(), PartySet{2}), ArgumentError);
}

TEST(PartialTrace, TracePreserved) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_state_on({2, 3, 2}, rng).scaled(1.3);
        for (const auto& keep : {PartySet{0}, PartySet{1, 2}, PartySet{0, 2}, PartySet{0, 1, 2}}) {
            EXPECT_NEAR(std::abs(partial_trace(s, keep).trace() - s.norm_squared()), 0.0, 1e-12);
        }
    }
}

TEST(PartialTrace, ProductFactorScalesMarginal) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = random_state_on({3, 2}, rng);
        const auto phi = random_state_on({2, 2}, rng).scaled(0.7);
        const auto joint = tensor_product(psi, phi);
        for (std::size_t l = 0; l < 2; ++l) {
            const auto lhs = partial_trace(joint, PartySet{l});
            const auto alone = partial_trace(psi, PartySet{l});
            const double scale = phi.norm_squared();
            for (std::size_t r = 0; r < lhs.dim(); ++r) {
                for (std::size_t c = 0; c < lhs.dim(); ++c) {
                    EXPECT_LT(std::abs(lhs(r, c) - scale * alone(r, c)), 1e-12);
                }
            }
        }
    }
}

TEST(PartialTrace, MatchesBlockSumOracle) {
    std::mt19937_64 rng(99);
    const std::vector<Dims> registers = {{2}, {2, 2}, {3, 5}, {2, 3, 4}, {4, 4}, {2, 2, 2, 2},
                                         {5, 2, 3}, {2, 2, 2, 2, 2, 2, 2, 2}, {4, 4, 4, 4}};
    for (const auto& dims : registers) {
        const auto s = random_state_on(dims, rng);
        const std::size_t n = dims.size();
        for (std::size_t mask_bits = 1; mask_bits < (std::size_t{1} << n); ++mask_bits) {
            std::vector<std::size_t> keep;
            for (std::size_t p = 0; p < n; ++p) {
                if (mask_bits & (std::size_t{1} << (n - 1 - p))) {
                    keep.push_back(p);
                }
            }
            const auto expected = oracle::partial_trace(s, keep);
            const auto got = partial_trace(s, PartySet(keep));
            ASSERT_EQ(got.dim() * got.dim(), expected.size());
            EXPECT_LE(oracle::max_abs_diff(got.data(), expected), 1e-13);
        }
    }
}

TEST(DistanceToMaximallyMixed, SimpleCases) {
    EXPECT_EQ(distance_to_maximally_mixed(DensityMatrix::maximally_mixed(2)), 0.0);
    EXPECT_DOUBLE_EQ(distance_to_maximally_mixed(DensityMatrix(2, {1.0, 0.0, 0.0, 0.0})), 0.5);
}

TEST(DistanceToMaximallyMixed, TwoQuditBasisMarginalsAtFour) {
    for (std::size_t k = 0; k < 16; ++k) {
        const StateVector s({4, 4}, oracle::two_qudit_element(4, k));
        EXPECT_LE(distance_to_maximally_mixed(partial_trace(s, PartySet{0})), 1e-12);
        EXPECT_LE(distance_to_maximally_mixed(partial_trace(s, PartySet{1})), 1e-12);
    }
}

TEST(DensityMatrix, MinEigenvalueOfKnownMatrix) {
    // [[0.75, 0.25i], [-0.25i, 0.25]] has eigenvalues 0.5 +- sqrt(2)/4.
    const DensityMatrix rho(2, {0.75, cplx(0, 0.25), cplx(0, -0.25), 0.25});
    EXPECT_NEAR(rho.min_eigenvalue(), 0.5 - std::sqrt(2.0) / 4.0, 1e-12);
}

} // namespace
} // namespace qmask
