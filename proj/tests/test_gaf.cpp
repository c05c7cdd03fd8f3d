#include <catch_amalgamated.hpp>

#include <numbers>

#include "rmtlab/error.hpp"
#include "rmtlab/gaf.hpp"

using namespace rmtlab;
using Catch::Approx;

namespace {

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const LabError& e) {
        return e.kind();
    }
    return ErrorKind::IoFailure;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - m) * (v - m);
    var /= static_cast<double>(x.size() - 1);
    return {m, std::sqrt(var / static_cast<double>(x.size()))};
}

}  // namespace

TEST_CASE("GAF coefficients", "[gaf][sample]") {
    const auto a = sample_gaf(30, {51, 0});
    CHECK(a.coefficients == sample_gaf(30, {51, 0}).coefficients);
    CHECK(a.coefficients != sample_gaf(30, {51, 1}).coefficients);
    CHECK(a.truncation() == 30);
    CHECK(kind_of([] { sample_gaf(1, {}); }) == ErrorKind::InvalidTruncation);

    const int draws = 10000;
    std::vector<double> power(4, 0.0);
    Complex cross = 0.0;
    double p0 = 0.0;
    double p1 = 0.0;
    for (int k = 0; k < draws; ++k) {
        const auto g = sample_gaf(4, {52, std::uint64_t(k)});
        for (std::size_t i = 0; i < 4; ++i) power[i] += std::norm(g.coefficients[i]);
        cross += g.coefficients[0] * std::conj(g.coefficients[1]);
        p0 += std::norm(g.coefficients[0]);
        p1 += std::norm(g.coefficients[1]);
    }
    for (double p : power) CHECK(p / draws == Approx(1.0).margin(0.05));
    CHECK(std::abs(cross) / std::sqrt(p0 * p1) <= 0.03);
}

TEST_CASE("GAF evaluation and shift", "[gaf][sample]") {
    GafSample g{{1.0, 2.0, Complex(0.0, 3.0)}};
    const Complex z{0.2, -0.1};
    CHECK(std::abs(g.evaluate(z) - (1.0 + 2.0 * z + Complex(0.0, 3.0) * z * z)) < 1e-15);
    const auto s = g.shifted();
    REQUIRE(s.truncation() == 4);
    CHECK(std::abs(s.evaluate(z) - z * g.evaluate(z)) < 1e-15);
}

TEST_CASE("tail criterion", "[gaf][truncation]") {
    for (double r : {0.3, 0.5, 0.7, 0.9}) {
        const Index k = minimum_truncation(r);
        CHECK(std::pow(r, double(k)) / (1.0 - r) <= 1e-6);
        CHECK(std::pow(r, double(k - 1)) / (1.0 - r) > 1e-6);
    }
    CHECK(minimum_truncation(0.5) == 21);
    CHECK(minimum_truncation(0.9) == 153);
}

TEST_CASE("zeros of trivial functions", "[gaf][zeros]") {
    GafSample linear{std::vector<Complex>(30, 0.0)};
    linear.coefficients[1] = 1.0;
    const auto z = gaf_zeros(linear, 0.3, 0.5);
    REQUIRE(z.size() == 1);
    CHECK(std::abs(z[0] - 0.3) < 1e-14);
    CHECK(argument_principle_count(linear, 0.3, 0.5) == 1);
    CHECK(gaf_zeros(linear, 0.7, 0.5).empty());

    GafSample constant{std::vector<Complex>(30, 0.0)};
    constant.coefficients[0] = Complex(0.4, 0.1);
    CHECK(kind_of([&] { gaf_zeros(constant, Complex(0.4, 0.1), 0.5); }) == ErrorKind::DegenerateInput);

    CHECK(kind_of([&] { gaf_zeros(sample_gaf(10, {}), 0.0, 0.5); }) == ErrorKind::TruncationTooSmall);
}

TEST_CASE("zero finder agrees with the argument principle", "[gaf][zeros][property]") {
    for (std::uint64_t k = 0; k < 200; ++k) {
        const auto g = sample_gaf(minimum_truncation(0.9), {53, k});
        const Complex c{0.3 * std::cos(double(k)), 0.3 * std::sin(double(k))};
        const auto zeros = gaf_zeros(g, c, 0.9);
        CHECK(static_cast<int>(zeros.size()) == argument_principle_count(g, c, 0.9));
        for (Complex z : zeros) {
            CHECK(std::abs(z) <= 0.9);
            CHECK(std::abs(g.evaluate(z) - c) < 1e-8);
        }
    }
}

TEST_CASE("mean zero count in the half disk", "[gaf][zeros][montecarlo]") {
    std::vector<double> counts;
    for (std::uint64_t k = 0; k < 2000; ++k)
        counts.push_back(static_cast<double>(gaf_zeros(sample_gaf(40, {54, k}), 0.0, 0.5).size()));
    // Edelman–Kostlan density 1/(π(1 − |z|²)²) integrates to r²/(1 − r²).
    CHECK(mean_se(counts).mean == Approx(1.0 / 3.0).margin(0.05));
}

TEST_CASE("phase rotation leaves the zero count unchanged", "[gaf][zeros][property]") {
    const Complex phase = std::polar(1.0, 1.1);
    const Complex c{0.5, 0.2};
    std::vector<double> plain;
    std::vector<double> rotated;
    for (std::uint64_t k = 0; k < 500; ++k) {
        const auto g = sample_gaf(80, {55, k});
        GafSample r = g;
        for (auto& a : r.coefficients) a *= phase;
        const auto n_plain = gaf_zeros(g, c, 0.8).size();
        CHECK(gaf_zeros(r, c * phase, 0.8).size() == n_plain);
        plain.push_back(static_cast<double>(n_plain));
        rotated.push_back(static_cast<double>(gaf_zeros(sample_gaf(80, {56, k}), c * phase, 0.8).size()));
    }
    const auto a = mean_se(plain);
    const auto b = mean_se(rotated);
    CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.se, b.se));
}

TEST_CASE("doubling the truncation does not move zeros", "[gaf][truncation][property]") {
    const double r = 0.7;
    const Index k0 = minimum_truncation(r);
    for (std::uint64_t k = 0; k < 50; ++k) {
        const auto full = sample_gaf(2 * k0, {57, k});
        GafSample cut{std::vector<Complex>(full.coefficients.begin(), full.coefficients.begin() + k0)};
        const auto zf = gaf_zeros(full, 0.0, r);
        const auto zc = gaf_zeros(cut, 0.0, r);
        // Zeros within 1e-3 of the boundary may legitimately cross it.
        for (Complex z : zf) {
            if (std::abs(std::abs(z) - r) < 1e-3) continue;
            double best = std::numeric_limits<double>::infinity();
            for (Complex w : zc) best = std::min(best, std::abs(z - w));
            CHECK(best <= 1e-6);
        }
    }
}

TEST_CASE("cloud comparison", "[gaf][compare]") {
    std::vector<std::vector<Complex>> a;
    std::vector<std::vector<Complex>> b;
    for (std::uint64_t k = 0; k < 300; ++k) {
        a.push_back(gaf_zeros(sample_gaf(153, {58, k}), 0.0, 0.9));
        b.push_back(gaf_zeros(sample_gaf(153, {59, k}), 0.0, 0.9));
    }
    const std::vector<std::pair<double, double>> annuli{{0.0, 0.5}, {0.5, 0.7}, {0.7, 0.85}};
    const auto rows = compare_clouds(a, b, annuli);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) CHECK(std::abs(row.z_score) <= 3.0);
    // Expected counts from the density: r²/(1 − r²) differences.
    auto mass = [](double r) { return r * r / (1.0 - r * r); };
    for (std::size_t i = 0; i < 3; ++i) {
        const double expected = mass(annuli[i].second) - mass(annuli[i].first);
        CHECK(std::abs(rows[i].mean_a - expected) <= 4.0 * rows[i].stderr_a);
    }

    const auto self = compare_clouds(a, a, annuli);
    for (const auto& row : self) CHECK(row.z_score == 0.0);

    std::vector<std::vector<Complex>> few(a.begin(), a.begin() + 50);
    CHECK(kind_of([&] { compare_clouds(few, b, annuli); }) == ErrorKind::InsufficientTrials);
}
