#include <catch2/catch_amalgamated.hpp>

#include "fisrg/morphology.hpp"
#include "fisrg/rng.hpp"
#include "oracle.hpp"

using namespace fisrg;

namespace {

BinaryMask random_mask(int w, int h, Rng& rng, int density = 4) {
    BinaryMask m(w, h);
    for (auto& b : m.bits) b = rng.uniform_index(density) == 0;
    return m;
}

bool subset(const BinaryMask& a, const BinaryMask& b) {
    for (std::size_t i = 0; i < a.bits.size(); ++i)
        if (a.bits[i] && !b.bits[i]) return false;
    return true;
}

} // namespace

TEST_CASE("dilating a single pixel with a 3x3 square gives a 3x3 block") {
    BinaryMask m(7, 7);
    m.set(3, 3, true);
    const BinaryMask d = dilate(m, {SeShape::Square, 3});
    REQUIRE(d.count() == 9);
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) REQUIRE(d.at(3 + dx, 3 + dy));
}

TEST_CASE("dilation and erosion of an empty mask are empty") {
    const BinaryMask m(9, 5);
    REQUIRE(dilate(m, {SeShape::Square, 3}).count() == 0);
    REQUIRE(erode(m, {SeShape::Disk, 5}).count() == 0);
}

TEST_CASE("two pixels 2 apart merge into one component under a 3x3 dilation") {
    BinaryMask m(9, 9);
    m.set(3, 4, true);
    m.set(5, 4, true);
    const BinaryMask d = dilate(m, {SeShape::Square, 3});
    REQUIRE(oracle::count_components_8(d) == 1);
    REQUIRE(d == oracle::dilate_by_stamping(m, {SeShape::Square, 3}));
}

TEST_CASE("eroding a full mask removes the 1-pixel border") {
    const BinaryMask full(8, 6, true);
    const BinaryMask e = erode(full, {SeShape::Square, 3});
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 8; ++x) {
            const bool interior = x >= 1 && x <= 6 && y >= 1 && y <= 4;
            REQUIRE(e.at(x, y) == interior);
        }
    REQUIRE(e == oracle::erode_by_duality(full, {SeShape::Square, 3}));
}

TEST_CASE("eroding a 3x3 block with a 3x3 square leaves the center pixel") {
    BinaryMask m(9, 9);
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) m.set(4 + dx, 4 + dy, true);
    const BinaryMask e = erode(m, {SeShape::Square, 3});
    REQUIRE(e.count() == 1);
    REQUIRE(e.at(4, 4));
}

TEST_CASE("dilate and erode match the independent oracles on random masks") {
    Rng rng(404);
    for (int trial = 0; trial < 12; ++trial) {
        const BinaryMask m = random_mask(20, 14, rng);
        for (const StructuringElement se :
             {StructuringElement{SeShape::Square, 3}, StructuringElement{SeShape::Disk, 5},
              StructuringElement{SeShape::Square, 5}}) {
            REQUIRE(dilate(m, se) == oracle::dilate_by_stamping(m, se));
            REQUIRE(erode(m, se) == oracle::erode_by_duality(m, se));
        }
    }
}

TEST_CASE("dilation and erosion are monotone in the mask argument") {
    Rng rng(55);
    for (int trial = 0; trial < 8; ++trial) {
        const BinaryMask m1 = random_mask(16, 16, rng, 5);
        BinaryMask m2 = m1;
        for (auto& b : m2.bits)
            if (rng.uniform_index(6) == 0) b = 1; // superset of m1
        REQUIRE(subset(m1, m2));
        const StructuringElement se{SeShape::Square, 3};
        REQUIRE(subset(dilate(m1, se), dilate(m2, se)));
        REQUIRE(subset(erode(m1, se), erode(m2, se)));
    }
}

TEST_CASE("erode is the dual of dilate away from borders") {
    Rng rng(91);
    // content confined to the interior so the border convention cannot differ
    BinaryMask m(20, 20);
    for (int y = 6; y < 14; ++y)
        for (int x = 6; x < 14; ++x) m.set(x, y, rng.uniform_index(2) != 0);
    const StructuringElement se{SeShape::Square, 3};

    BinaryMask complement(20, 20);
    for (std::size_t i = 0; i < m.bits.size(); ++i) complement.bits[i] = m.bits[i] ? 0 : 1;
    const BinaryMask dual = dilate(complement, se);
    const BinaryMask eroded = erode(m, se);
    for (int y = 4; y < 16; ++y)
        for (int x = 4; x < 16; ++x) REQUIRE(eroded.at(x, y) == !dual.at(x, y));
}

TEST_CASE("postprocess with equal kernels is an extensive, idempotent closing") {
    // content kept clear of the border: the outside-is-false erosion
    // convention deliberately trims border-touching regions
    Rng rng(123);
    BinaryMask m(18, 18);
    for (int y = 4; y < 14; ++y)
        for (int x = 4; x < 14; ++x) m.set(x, y, rng.uniform_index(3) == 0);
    const BinaryMask closed = postprocess(m, 3, 3);
    REQUIRE(subset(m, closed));
    REQUIRE(postprocess(closed, 3, 3) == closed);
}

TEST_CASE("postprocess fills a 1-pixel hole") {
    BinaryMask m(5, 5, true);
    m.set(2, 2, false);
    const BinaryMask filled = postprocess(m, 3, 3);
    REQUIRE(filled.at(2, 2));
}

TEST_CASE("postprocess rejects erosion kernels larger than the dilation kernel") {
    REQUIRE_THROWS_AS(postprocess(BinaryMask(5, 5), 3, 5), KernelOrderViolation);
}

TEST_CASE("structuring elements validate their size") {
    REQUIRE_THROWS_AS((StructuringElement{SeShape::Square, 4}.offsets()), Error);
    REQUIRE_THROWS_AS((StructuringElement{SeShape::Disk, 0}.offsets()), Error);
    REQUIRE(StructuringElement{SeShape::Square, 1}.offsets().size() == 1);
    REQUIRE(StructuringElement{SeShape::Disk, 3}.offsets().size() == 5); // plus shape
}
