#include "test_util.hpp"
#include "wsm/elasticity.hpp"

#include <doctest.h>

using namespace wsm;

namespace {

template <int Dim>
SymTensor<Dim> random_sym() {
    return SymTensor<Dim>::symmetric_part(test::random_mat<Dim>(-1.0, 1.0));
}

template <int Dim>
bool is_zero(const SymTensor<Dim>& t) {
    return t == SymTensor<Dim>{};
}

}  // namespace

TEST_SUITE("elasticity") {

TEST_CASE("strain of simple gradients") {
    CHECK(is_zero(strain<2>(Mat<2>{})));
    CHECK(is_zero(strain<2>(Mat<2>{{{0.0, 1.0}, {-1.0, 0.0}}})));
    CHECK(strain<2>(Mat<2>{{{1.0, 0.0}, {0.0, 1.0}}}) == SymTensor<2>::identity());

    const Mat<3> g{{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}, {7.0, 8.0, 9.0}}};
    const auto e = strain<3>(g);
    CHECK(e(0, 1) == 3.0);
    CHECK(e(1, 0) == 3.0);
    CHECK(e(0, 2) == 5.0);
    CHECK(e(1, 2) == 7.0);
    CHECK(e(2, 2) == 9.0);
}

TEST_CASE("stress of simple strains") {
    const auto mat = IsotropicElasticity::make(1.0, 1.0, 2);
    CHECK(is_zero(stress(SymTensor<2>{}, mat)));
    const auto s = stress(SymTensor<2>::identity(), mat);
    CHECK(s(0, 0) == 4.0);
    CHECK(s(1, 1) == 4.0);
    CHECK(s(0, 1) == 0.0);

    SymTensor<2> shear;
    shear(0, 1) = 0.3;
    const auto t = stress(shear, mat);
    CHECK(t(0, 0) == 0.0);
    CHECK(t(1, 1) == 0.0);
    CHECK(t(0, 1) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("traction") {
    const auto m2 = IsotropicElasticity::make(1.0, 1.0, 2);
    const auto m3 = IsotropicElasticity::make(1.0, 1.0, 3);
    CHECK(traction(SymTensor<2>{}, m2, Vec<2>{0.6, 0.8}) == Vec<2>{0.0, 0.0});
    CHECK(traction(SymTensor<2>::identity(), m2, Vec<2>{1.0, 0.0}) == Vec<2>{4.0, 0.0});
    CHECK(traction(SymTensor<3>::identity(), m3, Vec<3>{0.0, 0.0, 1.0}) == Vec<3>{0.0, 0.0, 5.0});
    CHECK_THROWS_AS(traction(SymTensor<2>::identity(), m2, Vec<2>{1.0, 1e-3}), std::invalid_argument);
    CHECK_THROWS_AS(traction(SymTensor<3>::identity(), m3, Vec<3>{0.0, 0.0, 2.0}), std::invalid_argument);
}

TEST_CASE("material validation") {
    CHECK_THROWS_AS(IsotropicElasticity::make(1.0, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(IsotropicElasticity::make(-1.0, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(IsotropicElasticity::make(1.0, 1.0, 4), std::invalid_argument);
    CHECK_NOTHROW(IsotropicElasticity::make(-0.5, 1.0, 3));
}

TEST_CASE("positivity constants") {
    using P = std::pair<double, double>;
    CHECK(positivity_constants(IsotropicElasticity::make(1.0, 1.0, 2)) == P{2.0, 4.0});
    CHECK(positivity_constants(IsotropicElasticity::make(0.0, 1.0, 2)) == P{2.0, 2.0});
    CHECK(positivity_constants(IsotropicElasticity::make(0.0, 1.0, 3)) == P{2.0, 2.0});
    CHECK(positivity_constants(IsotropicElasticity::make(1.0, 1.0, 3)) == P{2.0, 5.0});
    const auto [lo, hi] = positivity_constants(IsotropicElasticity::make(-0.5, 1.0, 3));
    CHECK(lo == doctest::Approx(0.5));
    CHECK(hi == doctest::Approx(2.0));
}

TEST_CASE_TEMPLATE("Hooke map bounded by positivity constants", T, std::integral_constant<int, 2>,
                   std::integral_constant<int, 3>) {
    constexpr int Dim = T::value;
    for (double lambda : {0.0, 1.0, 7.5, -0.4}) {
        const auto mat = IsotropicElasticity::make(lambda, 1.3, Dim);
        const auto [lo, hi] = positivity_constants(mat);
        for (int k = 0; k < 1000; ++k) {
            const auto e = random_sym<Dim>();
            const double ee = e.contract(e);
            const double ae = stress(e, mat).contract(e);
            CHECK(ae >= lo * ee * (1.0 - 1e-12));
            CHECK(ae <= hi * ee * (1.0 + 1e-12));
        }
    }
}

TEST_CASE_TEMPLATE("Hooke map is symmetric", T, std::integral_constant<int, 2>, std::integral_constant<int, 3>) {
    constexpr int Dim = T::value;
    const auto mat = IsotropicElasticity::make(1.7, 0.8, Dim);
    for (int k = 0; k < 200; ++k) {
        const auto e = random_sym<Dim>();
        const auto f = random_sym<Dim>();
        CHECK(std::abs(stress(e, mat).contract(f) - stress(f, mat).contract(e)) <= 1e-14);
    }
}

TEST_CASE_TEMPLATE("rigid rotations are stress free", T, std::integral_constant<int, 2>,
                   std::integral_constant<int, 3>) {
    constexpr int Dim = T::value;
    const auto mat = IsotropicElasticity::make(1.0, 1.0, Dim);
    for (int k = 0; k < 50; ++k) {
        auto g = test::random_mat<Dim>(-1.0, 1.0);
        for (int i = 0; i < Dim; ++i) {
            g[i][i] = 0.0;
            for (int j = 0; j < i; ++j) g[i][j] = -g[j][i];
        }
        CHECK(is_zero(stress(strain<Dim>(g), mat)));
    }
}

}
