#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "qrsmem/basis.hpp"
#include "qrsmem/errors.hpp"

using namespace qrsmem;

namespace {

QuditBasis shipped_basis() { return QuditBasis::load(std::string(QRSMEM_DATA_DIR) + "/basis_selfdual_s11.txt"); }

// Trace Gram entry evaluated with the table-free reference operations.
int gram_ref(const FieldCtx& f, Elem a, Elem b) { return f.trace_reference(f.mul_reference(a, b)); }

}  // namespace

TEST(Basis, ShippedBasisIsSelfDual) {
    const auto b = shipped_basis();
    const auto& f = b.field();
    EXPECT_EQ(f.s(), 11);
    EXPECT_TRUE(b.is_self_dual());
    for (std::size_t i = 0; i < 11; ++i)
        for (std::size_t j = 0; j < 11; ++j) EXPECT_EQ(f.trace(f.mul(b[i], b[j])), i == j ? 1 : 0);
    // First listed element is 1 + t^5 + t^6.
    EXPECT_EQ(b[0], 1 + 32 + 64);
}

TEST(Basis, PolynomialBasisIsNotSelfDual) {
    auto f = FieldCtx::gf2048();
    const auto b = QuditBasis::polynomial(f);
    bool identity = true;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j)
            if (gram_ref(*f, static_cast<Elem>(1u << i), static_cast<Elem>(1u << j)) != (i == j)) identity = false;
    EXPECT_FALSE(identity);
    EXPECT_FALSE(b.is_self_dual());
}

TEST(Basis, RepeatedElementRejected) {
    auto f = FieldCtx::make(4, FieldCtx::default_poly(4));
    EXPECT_THROW(QuditBasis(f, {1, 2, 2, 8}), DependentBasis);
    EXPECT_THROW(QuditBasis(f, {1, 2, 3, 8}).dual(), DependentBasis);
    EXPECT_THROW(QuditBasis(f, {1, 2, 4}), DependentBasis);
}

TEST(Basis, DualBasis) {
    const auto b = shipped_basis();
    EXPECT_EQ(b.dual(), b);
    auto f16 = FieldCtx::make(4, FieldCtx::default_poly(4));
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rb = random_basis(f16, rng);
        const auto db = rb.dual();
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) ASSERT_EQ(gram_ref(*f16, rb[i], db[j]), i == j ? 1 : 0);
        EXPECT_EQ(db.dual(), rb);
    }
    auto f = FieldCtx::gf2048();
    const auto pb = QuditBasis::polynomial(f);
    EXPECT_EQ(pb.dual().dual(), pb);
}

TEST(Basis, ExpandContract) {
    const auto b = shipped_basis();
    const auto& f = b.field();
    EXPECT_EQ(b.expand(0), Bits(11, 0));
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const Elem a = static_cast<Elem>(uniform_below(rng, f.q()));
        ASSERT_EQ(b.contract(b.expand(a)), a);
        // Self-dual: coordinates are Tr(a B_i).
        const Bits bits = b.expand(a);
        for (std::size_t k = 0; k < 11; ++k) ASSERT_EQ(bits[k], f.trace(f.mul(a, b[k])));
    }
    for (int i = 0; i < 200; ++i) {
        Bits c(11);
        Elem a = 0;
        for (std::size_t k = 0; k < 11; ++k) {
            c[k] = static_cast<std::uint8_t>(uniform_below(rng, 2));
            if (c[k]) a ^= b[k];
        }
        ASSERT_EQ(b.expand(a), c);
    }
    auto f16 = FieldCtx::make(4, FieldCtx::default_poly(4));
    const auto rb = random_basis(f16, rng);
    for (std::uint32_t a = 0; a < 16; ++a) ASSERT_EQ(rb.contract(rb.expand(static_cast<Elem>(a))), a);
}

TEST(Basis, RandomBasisUniformOverGf8) {
    auto f8 = FieldCtx::make(3, FieldCtx::default_poly(3));
    // Oracle: all ordered triples of GF(8) elements that are GF(2)-independent.
    std::map<std::vector<Elem>, int> counts;
    for (Elem a = 1; a < 8; ++a)
        for (Elem b = 1; b < 8; ++b)
            for (Elem c = 1; c < 8; ++c)
                if (gf2_rank({a, b, c}) == 3) counts[{a, b, c}] = 0;
    ASSERT_EQ(counts.size(), 168u);
    Rng rng(13);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const auto rb = random_basis(f8, rng);
        ASSERT_EQ(gf2_rank(std::vector<std::uint32_t>(rb.elements().begin(), rb.elements().end())), 3u);
        ++counts.at(rb.elements());
    }
    const double p = 1.0 / 168, mean = draws * p, sigma = std::sqrt(draws * p * (1 - p));
    for (const auto& [k, c] : counts) EXPECT_LE(std::abs(c - mean), 4 * sigma);
}

TEST(Basis, DistinctSeedsGiveDistinctBases) {
    auto f = FieldCtx::gf2048();
    Rng r1(1), r2(2);
    EXPECT_FALSE(random_basis(f, r1) == random_basis(f, r2));
}

TEST(Basis, FileFormat) {
    const auto b = shipped_basis();
    EXPECT_EQ(QuditBasis::parse(b.serialize()), b);
    EXPECT_THROW(QuditBasis::parse("s=11 poly=2053\n1\n2\n"), ParseError);
    EXPECT_THROW(QuditBasis::parse("garbage\n"), ParseError);
    EXPECT_THROW(QuditBasis::parse("s=3 poly=11\n1\n2\n9\n"), OutOfRange);
    EXPECT_THROW(QuditBasis::parse("s=3 poly=9\n1\n2\n4\n"), ReducibleModulus);
    EXPECT_THROW(QuditBasis::load("/nonexistent/basis.txt"), ParseError);
}
