#include "sievelab/normal_forms.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace sievelab;
using testutil::brute_force_kernel;
using testutil::minor_gcd;
using testutil::random_matrix;

namespace {

void check_snf_contract(const IntMatrix& a, const SmithForm& s) {
    REQUIRE(s.U * a * s.V == s.diagonal());
    REQUIRE(abs_val(s.U.determinant()) == 1);
    REQUIRE(abs_val(s.V.determinant()) == 1);
    for (size_t i = 0; i < s.d.size(); ++i) {
        REQUIRE(s.d[i] > 0);
        if (i + 1 < s.d.size()) REQUIRE(s.d[i + 1] % s.d[i] == 0);
    }
}

} // namespace

TEST_CASE("snf on frozen examples") {
    SECTION("diag(4,6) has invariant factors 2, 12") {
        IntMatrix a = IntMatrix::from_rows({{4, 0}, {0, 6}});
        SmithForm s = snf(a);
        check_snf_contract(a, s);
        // oracle: d1 = gcd of entries, d1*d2 = gcd of 2x2 minors
        REQUIRE(minor_gcd(a, 1) == 2);
        REQUIRE(minor_gcd(a, 2) == 24);
        REQUIRE(s.d == std::vector<Integer>{2, 12});
    }
    SECTION("identity") {
        IntMatrix a = IntMatrix::identity(3);
        SmithForm s = snf(a);
        check_snf_contract(a, s);
        REQUIRE(s.d == std::vector<Integer>{1, 1, 1});
        REQUIRE(s.U == IntMatrix::identity(3));
        REQUIRE(s.V == IntMatrix::identity(3));
    }
    SECTION("zero matrix has empty invariant factors") {
        SmithForm s = snf(IntMatrix(2, 3));
        REQUIRE(s.d.empty());
        REQUIRE(s.rank() == 0);
    }
    SECTION("zero-dimensional matrices") {
        check_snf_contract(IntMatrix(0, 0), snf(IntMatrix(0, 0)));
        check_snf_contract(IntMatrix(0, 3), snf(IntMatrix(0, 3)));
        check_snf_contract(IntMatrix(3, 0), snf(IntMatrix(3, 0)));
    }
}

TEST_CASE("snf properties on random matrices") {
    std::mt19937_64 rng(20240901);
    for (int trial = 0; trial < 400; ++trial) {
        int rows = static_cast<int>(rng() % 6) + 1;
        int cols = static_cast<int>(rng() % 6) + 1;
        IntMatrix a = random_matrix(rng, rows, cols, 9);
        SmithForm s = snf(a);
        check_snf_contract(a, s);
        if (rows <= 4 && cols <= 4) {
            Integer prod = 1;
            for (int k = 1; k <= std::min(rows, cols); ++k) {
                Integer g = minor_gcd(a, k);
                if (k <= s.rank()) {
                    prod *= s.d[static_cast<size_t>(k) - 1];
                    REQUIRE(prod == g);
                } else {
                    REQUIRE(g == 0);
                }
            }
        }
    }
}

TEST_CASE("kernel_basis frozen examples") {
    SECTION("(2 -2) has kernel (1,1)") {
        IntMatrix k = kernel_basis(IntMatrix::from_rows({{2, -2}}));
        REQUIRE(k == IntMatrix::from_rows({{1}, {1}}));
    }
    SECTION("identity has empty kernel") {
        REQUIRE(kernel_basis(IntMatrix::identity(4)).cols() == 0);
    }
    SECTION("[1 1; 1 1] has kernel (1,-1)") {
        IntMatrix a = IntMatrix::from_rows({{1, 1}, {1, 1}});
        // oracle: brute-force small-entry kernel vectors all lie on one line
        auto brute = brute_force_kernel(a, 3);
        REQUIRE(!brute.empty());
        for (const auto& v : brute) REQUIRE(v[0] == -v[1]);
        IntMatrix k = kernel_basis(a);
        REQUIRE(k == IntMatrix::from_rows({{1}, {-1}}));
    }
}

TEST_CASE("kernel_basis properties") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int rows = static_cast<int>(rng() % 4) + 1;
        int cols = static_cast<int>(rng() % 4) + 1;
        IntMatrix a = random_matrix(rng, rows, cols, 4);
        IntMatrix k = kernel_basis(a);
        REQUIRE((a * k).is_zero());
        REQUIRE(k.cols() == cols - rank(a));
        // every brute-force kernel vector is an integer combination of K
        LatticeSolver solver(k);
        for (const auto& v : brute_force_kernel(a, 2)) {
            auto sol = solver.solve(v);
            REQUIRE(sol.has_value());
        }
    }
}

TEST_CASE("lattice_contains") {
    SECTION("frozen examples") {
        auto x = lattice_contains(IntMatrix::from_rows({{2}}), {Integer(4)});
        REQUIRE(x.has_value());
        REQUIRE(*x == std::vector<Integer>{2});
        REQUIRE(!lattice_contains(IntMatrix::from_rows({{2}}), {Integer(3)}).has_value());
        auto y = lattice_contains(IntMatrix::from_rows({{2, 0}, {0, 3}}), {Integer(2), Integer(3)});
        REQUIRE(y.has_value());
        REQUIRE(*y == std::vector<Integer>({1, 1}));
    }
    SECTION("dimension mismatch is an error") {
        REQUIRE_THROWS_AS(lattice_contains(IntMatrix::from_rows({{2}}), {Integer(1), Integer(2)}),
                          invalid_input);
    }
    SECTION("solutions are exact; non-members have no bounded solution") {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 120; ++trial) {
            int rows = static_cast<int>(rng() % 3) + 1;
            int cols = static_cast<int>(rng() % 3) + 1;
            IntMatrix a = random_matrix(rng, rows, cols, 3);
            std::vector<Integer> b;
            for (int i = 0; i < rows; ++i) b.push_back(Integer(static_cast<int>(rng() % 7) - 3));
            auto x = lattice_contains(a, b);
            if (x) {
                REQUIRE(a.apply(*x) == b);
            } else {
                // brute force over a small coordinate box finds nothing
                std::vector<int> v(static_cast<size_t>(cols), -6);
                bool found = false;
                while (!found) {
                    std::vector<Integer> xx(v.begin(), v.end());
                    if (a.apply(xx) == b) found = true;
                    int pos = cols - 1;
                    while (pos >= 0 && v[static_cast<size_t>(pos)] == 6) {
                        v[static_cast<size_t>(pos)] = -6;
                        --pos;
                    }
                    if (pos < 0) break;
                    ++v[static_cast<size_t>(pos)];
                }
                REQUIRE(!found);
            }
        }
    }
}

TEST_CASE("is_surjective") {
    IntMatrix row(1, 3);
    row.at(0, 0) = 15;
    row.at(0, 1) = 10;
    row.at(0, 2) = 12;
    REQUIRE(is_surjective(row)); // gcd 1
    IntMatrix d74 = IntMatrix::from_rows({{7, 0}, {0, 4}});
    REQUIRE(snf(d74).d == std::vector<Integer>{1, 28});
    REQUIRE(!is_surjective(d74));
    REQUIRE(is_surjective(IntMatrix::identity(5)));
    REQUIRE(is_surjective(IntMatrix(0, 0)));
    REQUIRE(!is_surjective(IntMatrix(1, 0)));
}

TEST_CASE("cokernel_invariants") {
    REQUIRE(cokernel_invariants(IntMatrix::from_rows({{2}})) == GroupInvariants{0, {2}});
    REQUIRE(cokernel_invariants(IntMatrix(2, 0)) == GroupInvariants{2, {}});
    REQUIRE(cokernel_invariants(IntMatrix::from_rows({{4, 0}, {0, 6}})) ==
            GroupInvariants{0, {2, 12}});
}

TEST_CASE("column_hermite is canonical for the column lattice") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 150; ++trial) {
        int rows = static_cast<int>(rng() % 4) + 1;
        int cols = static_cast<int>(rng() % 4) + 1;
        IntMatrix a = random_matrix(rng, rows, cols, 4);
        IntMatrix h = column_hermite(a);
        // same lattice both ways
        REQUIRE(LatticeSolver(a).solve_matrix(h).has_value());
        REQUIRE(LatticeSolver(h).solve_matrix(a).has_value());
        // unimodular recombination does not change the form
        IntMatrix u = testutil::random_unimodular(rng, cols);
        REQUIRE(column_hermite(a * u) == h);
        // sign convention: first nonzero entry of each column is positive
        for (int j = 0; j < h.cols(); ++j)
            for (int i = 0; i < h.rows(); ++i) {
                if (h.at(i, j) == 0) continue;
                REQUIRE(h.at(i, j) > 0);
                break;
            }
    }
}

TEST_CASE("inverse_unimodular and saturation") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 60; ++trial) {
        int n = static_cast<int>(rng() % 4) + 1;
        IntMatrix u = testutil::random_unimodular(rng, n, 8);
        IntMatrix inv = inverse_unimodular(u);
        REQUIRE(u * inv == IntMatrix::identity(n));
        REQUIRE(inv * u == IntMatrix::identity(n));
    }
    SECTION("saturation of (2,4) in Z^2 is the line (1,2)") {
        // oracle: brute-force saturation over small multiples
        IntMatrix m = IntMatrix::from_rows({{2}, {4}});
        LatticeSolver im(m);
        for (int x = -4; x <= 4; ++x)
            for (int y = -4; y <= 4; ++y) {
                bool saturated = false;
                for (int k = 1; k <= 8 && !saturated; ++k)
                    if (im.contains({Integer(k * x), Integer(k * y)})) saturated = true;
                bool on_line = (y == 2 * x);
                if (x != 0 || y != 0) REQUIRE(saturated == on_line);
            }
        REQUIRE(saturation_basis(m) == IntMatrix::from_rows({{1}, {2}}));
    }
    SECTION("saturation of the zero map is zero") {
        REQUIRE(saturation_basis(IntMatrix(2, 1)).cols() == 0);
    }
    SECTION("saturation of a multiple of the identity is everything") {
        IntMatrix two = IntMatrix::from_rows({{2}});
        REQUIRE(saturation_basis(two) == IntMatrix::identity(1));
    }
}

TEST_CASE("determinant") {
    REQUIRE(IntMatrix::from_rows({{1, 2}, {3, 4}}).determinant() == -2);
    REQUIRE(IntMatrix::identity(4).determinant() == 1);
    REQUIRE(IntMatrix(3, 3).determinant() == 0);
    REQUIRE(IntMatrix(0, 0).determinant() == 1);
    IntMatrix a = IntMatrix::from_rows({{2, 0, 1}, {0, 3, 0}, {1, 0, 1}});
    REQUIRE(a.determinant() == 3);
}
