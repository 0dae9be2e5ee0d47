#include <algorithm>
#include <limits>

#include "doctest.h"
#include "scn/transforms.hpp"
#include "test_support.hpp"

using namespace scn;
using namespace scn::test;

namespace {

// Independent reference: builds each operation by *pushing* source pixels,
// composing single quarter turns and flips literally ("rotate then flip").
// The implementation under test gathers; agreement cross-checks the
// coordinate algebra.
Image ref_rot90(const Image& in) {
    Image out(in.width, in.height);
    for (int r = 0; r < in.height; ++r)
        for (int c = 0; c < in.width; ++c)
            out.at(in.width - 1 - c, r) = in.at(r, c);
    return out;
}

Image ref_flipud(const Image& in) {
    Image out(in.height, in.width);
    for (int r = 0; r < in.height; ++r)
        for (int c = 0; c < in.width; ++c)
            out.at(in.height - 1 - r, c) = in.at(r, c);
    return out;
}

Image ref_apply(int k, const Image& img) {
    Image x = img;
    const int quarter_turns[] = {0, 0, 0, 1, 1, 2, 2, 3, 3};  // 1-indexed by k
    for (int i = 0; i < quarter_turns[k]; ++i) x = ref_rot90(x);
    if (k % 2 == 0) x = ref_flipud(x);
    return x;
}

Image distinct_3x4() {
    Image img(3, 4);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = static_cast<double>(i + 1) / 16.0;
    return img;
}

}  // namespace

TEST_CASE("apply_d4 matches the push-map reference on all shapes") {
    const int shapes[][2] = {{1, 1}, {1, 2}, {3, 4}, {5, 5}, {2, 7}};
    for (auto [h, w] : shapes) {
        const Image img = random_image(1000 + h * 10 + w, h, w);
        for (int k = 1; k <= 8; ++k) {
            CAPTURE(h);
            CAPTURE(w);
            CAPTURE(k);
            CHECK(bit_equal(apply_d4(D4Transform(k), img), ref_apply(k, img)));
        }
    }
}

TEST_CASE("spec vectors for individual operations") {
    SUBCASE("k=1 is the identity") {
        const Image img = random_image(3, 4, 5);
        CHECK(bit_equal(apply_d4(D4Transform(1), img), img));
    }
    SUBCASE("k=3 on 1x2 [a,b] stacks b on top") {
        const Image img(1, 2, {0.25, 0.75});
        const Image out = apply_d4(D4Transform(3), img);
        CHECK(out.height == 2);
        CHECK(out.width == 1);
        CHECK(out.data[0] == 0.75);
        CHECK(out.data[1] == 0.25);
    }
    SUBCASE("k=5 on 2x2 [[a,b],[c,d]] gives [[d,c],[b,a]]") {
        const Image img(2, 2, {0.1, 0.2, 0.3, 0.4});
        const Image out = apply_d4(D4Transform(5), img);
        CHECK(out.data == std::vector<double>{0.4, 0.3, 0.2, 0.1});
        // Same thing via two quarter turns, the brute-force route.
        CHECK(bit_equal(out, ref_rot90(ref_rot90(img))));
    }
    SUBCASE("four operations transpose dims, four preserve them") {
        for (int k = 1; k <= 8; ++k)
            CHECK(d4_transposes_dims(D4Transform(k)) == (k == 3 || k == 4 || k == 7 || k == 8));
    }
    SUBCASE("index outside 1..8 is rejected") {
        CHECK_THROWS_AS(D4Transform(0), ValidationError);
        CHECK_THROWS_AS(D4Transform(9), ValidationError);
    }
}

TEST_CASE("invert_d4 undoes apply_d4 bit-exactly") {
    const Image img = random_image(42, 3, 4);
    for (int k = 1; k <= 8; ++k) {
        CAPTURE(k);
        CHECK(bit_equal(invert_d4(D4Transform(k), apply_d4(D4Transform(k), img)), img));
    }

    SUBCASE("flip is an involution") {
        CHECK(bit_equal(invert_d4(D4Transform(2), apply_d4(D4Transform(2), img)), img));
        CHECK(bit_equal(apply_d4(D4Transform(2), apply_d4(D4Transform(2), img)), img));
    }
    SUBCASE("inverse of +90 is -90") {
        CHECK(bit_equal(invert_d4(D4Transform(3), img), apply_d4(D4Transform(7), img)));
        CHECK(d4_inverse(D4Transform(3)).k == 7);
    }
    SUBCASE("rot180+flip is an involution (checked on a 3x4 grid)") {
        const Image grid = distinct_3x4();
        const Image twice =
            apply_d4(D4Transform(6), apply_d4(D4Transform(6), grid));
        CHECK(bit_equal(twice, grid));
    }
}

TEST_CASE("all 64 compositions land inside the group") {
    const Image img = distinct_3x4();
    std::vector<Image> base;
    for (int k = 1; k <= 8; ++k) base.push_back(apply_d4(D4Transform(k), img));

    for (int a = 1; a <= 8; ++a) {
        for (int b = 1; b <= 8; ++b) {
            const Image composed = apply_d4(D4Transform(b), apply_d4(D4Transform(a), img));
            int matches = 0;
            for (const Image& candidate : base)
                if (bit_equal(composed, candidate)) ++matches;
            CAPTURE(a);
            CAPTURE(b);
            CHECK(matches == 1);  // distinct values make the match unique
        }
    }
}

TEST_CASE("every apply_d4 output is a pure permutation") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Image img = random_image(900 + seed, 5, 7);
        auto sorted_in = img.data;
        std::sort(sorted_in.begin(), sorted_in.end());
        for (int k = 1; k <= 8; ++k) {
            auto sorted_out = apply_d4(D4Transform(k), img).data;
            std::sort(sorted_out.begin(), sorted_out.end());
            CHECK(sorted_out == sorted_in);
        }
    }
}

TEST_CASE("affine transform") {
    SUBCASE("alpha=0 rejected at construction") {
        CHECK_THROWS_AS(AffineParams(0.0, 0.5), ValidationError);
    }
    SUBCASE("(1,0) is bit-identity") {
        Image img = random_image(7, 4, 4);
        img.data[0] = -0.0;
        CHECK(bit_equal(apply_affine(AffineParams(1.0, 0.0), img), img));
    }
    SUBCASE("(-1,1) fixes 0.5") {
        const Image img(1, 1, {0.5});
        CHECK(apply_affine(AffineParams(-1.0, 1.0), img).data[0] == 0.5);
    }
    SUBCASE("(2,-0.25) maps 0.5 to 0.75 and back") {
        const AffineParams p(2.0, -0.25);
        const Image img(1, 1, {0.5});
        const Image fwd = apply_affine(p, img);
        CHECK(fwd.data[0] == 0.75);
        CHECK(invert_affine(p, fwd).data[0] == 0.5);
    }
    SUBCASE("values may leave [0,1] unclamped") {
        const Image img(1, 2, {0.0, 1.0});
        const Image out = apply_affine(AffineParams(2.0, -0.5), img);
        CHECK(out.data[0] == -0.5);
        CHECK(out.data[1] == 1.5);
    }
    SUBCASE("invert after apply is identity to a couple of ulps") {
        Xoshiro256pp rng(321);
        for (int trial = 0; trial < 50; ++trial) {
            double alpha = (rng.next_double() * 3.75 + 0.25) * (rng.next_double() < 0.5 ? -1 : 1);
            double beta = rng.next_double() * 2.0 - 1.0;
            const AffineParams p(alpha, beta);
            const Image img = random_image(5000 + trial, 3, 3);
            const Image rt = invert_affine(p, apply_affine(p, img));
            for (std::size_t i = 0; i < img.data.size(); ++i) {
                const double scale =
                    std::max(1.0, std::fabs(img.data[i]) + std::fabs(beta / alpha));
                CHECK(std::fabs(rt.data[i] - img.data[i]) <=
                      2.0 * std::numeric_limits<double>::epsilon() * scale);
            }
        }
    }
}

TEST_CASE("inversion is an involution on the input") {
    const AffineParams inv(-1.0, 1.0);
    const Image img = random_image(11, 6, 6);
    const Image twice = apply_affine(inv, apply_affine(inv, img));
    CHECK(max_abs_diff(twice, img) <= 1e-15);
}
