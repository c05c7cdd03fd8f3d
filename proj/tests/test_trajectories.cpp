#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/error.hpp"
#include "rmtlab/lab/experiments.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/trajectories.hpp"

using namespace rmtlab;
using Catch::Approx;
using namespace std::complex_literals;

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

Vector unit(Index n, Index k) {
    Vector e = Vector::Zero(n);
    e(k) = 1.0;
    return e;
}

double cost(std::span<const Complex> a, std::span<const Complex> b, const std::vector<Index>& p) {
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) c += std::abs(a[i] - b[static_cast<std::size_t>(p[i])]);
    return c;
}

double median(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    return x[x.size() / 2];
}

std::vector<double> pooled(const OdeResidual& r) {
    std::vector<double> all;
    for (const auto& p : r.residuals) all.insert(all.end(), p.begin(), p.end());
    return all;
}

// Spectrum sorted by (Re, Im) for set comparison.
std::vector<Complex> sorted(std::vector<Complex> v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    return v;
}

}  // namespace

TEST_CASE("matching on small sets", "[trajectories][matching]") {
    const std::vector<Complex> a{Complex(1, 2), Complex(-3, 0), Complex(0.5, -1)};
    const auto id = match_sets(a, a);
    CHECK(id == std::vector<Index>{0, 1, 2});

    const std::vector<Complex> prev{0.0, 10.0};
    const std::vector<Complex> next{10.1, 0.1};
    CHECK(match_sets(prev, next) == std::vector<Index>{1, 0});

    CHECK(kind_of([&] { match_sets(prev, a); }) == ErrorKind::CardinalityMismatch);
}

TEST_CASE("matching is optimal over all permutations", "[trajectories][matching]") {
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        Rng rng({31, trial});
        std::vector<Complex> a(6);
        std::vector<Complex> b(6);
        for (auto& z : a) z = rng.complex_normal();
        // Half the trials use unrelated sets, half small perturbations of a shuffled copy.
        for (std::size_t i = 0; i < 6; ++i)
            b[i] = trial % 2 ? rng.complex_normal() : a[(i * 5 + 1) % 6] + 0.4 * rng.complex_normal();
        const auto p = match_sets(a, b);
        std::vector<Index> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            best = std::min(best, cost(a, b, perm));
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(cost(a, b, p) <= best + 1e-12);
    }
}

TEST_CASE("scalar additive path is linear", "[trajectories][track]") {
    const Matrix g = Matrix::Zero(1, 1);
    const auto model = ModelConfig::additive(unit(1, 0), unit(1, 0));
    const auto bundle = track(model, g, -1.0, 2.0, 30);
    REQUIRE(bundle.path_count() == 1);
    REQUIRE(bundle.grid.size() == 31);
    for (std::size_t k = 0; k < bundle.grid.size(); ++k) CHECK(std::abs(bundle.paths[0][k] - bundle.grid[k]) < 1e-15);
    CHECK(bundle.refinements == 0);

    CHECK(kind_of([&] { track(model, g, 0.0, 1.0, 1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { track(model, g, 1.0, 1.0, 5); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("2x2 anti-Hermitian paths are mirror images", "[trajectories][track]") {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = -1.0;
    h(1, 1) = 1.0;
    const Vector v = Vector::Constant(2, 1.0 / std::sqrt(2.0));
    const auto model = ModelConfig::anti_hermitian(v);
    const auto bundle = track(model, h, 0.0, 1.8, 36);
    REQUIRE(bundle.path_count() == 2);
    const int left = bundle.paths[0][0].real() < 0 ? 0 : 1;
    for (std::size_t k = 0; k < bundle.grid.size(); ++k) {
        const double t = bundle.grid[k];
        const Complex a = bundle.paths[left][k];
        const Complex b = bundle.paths[1 - left][k];
        CHECK(std::abs(a.real() + b.real()) < 1e-12);
        CHECK(std::abs(a.imag() - b.imag()) < 1e-12);
        // Closed form: λ = it/2 ± √(1 − t²/4).
        CHECK(std::abs(a - Complex(-std::sqrt(1.0 - t * t / 4.0), t / 2.0)) < 1e-12);
        // Imaginary trace grows exactly like t.
        CHECK(std::abs(a.imag() + b.imag() - t) < 1e-12);
    }
}

TEST_CASE("multiplicative path passes through zero", "[trajectories][track]") {
    const Index n = 12;
    const Matrix u = sample_haar_unitary(n, {32, 0});
    const auto model = ModelConfig::multiplicative(sample_unit_vector(n, {32, 0, 1}));
    const auto bundle = track(model, u, 1.0, -1.0, 40);
    const auto at0 = std::find_if(bundle.grid.begin(), bundle.grid.end(), [](double t) { return std::abs(t) < 1e-14; });
    REQUIRE(at0 != bundle.grid.end());
    const auto k = static_cast<std::size_t>(at0 - bundle.grid.begin());
    int small = 0;
    for (const auto& p : bundle.paths)
        if (std::abs(p[k]) <= 1e-8) ++small;
    CHECK(small == 1);
}

TEST_CASE("cross-sections are spectra and steps respect the gap criterion", "[trajectories][track][property]") {
    const auto inst = lab::make_instance(ModelKind::Additive, 15, {33, 0});
    const auto bundle = track(inst.model, inst.base, 0.0, 4.0, 20);
    for (std::size_t k = 0; k < bundle.grid.size(); k += 7) {
        const auto direct = to_std(eigenvalues(build_matrix(inst.model, inst.base, bundle.grid[k])));
        const auto a = sorted(bundle.cross_section(k));
        const auto b = sorted(direct);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) < 1e-9);
    }
    CHECK(bundle.min_gap > 0.0);
    for (std::size_t k = 1; k < bundle.grid.size(); ++k) {
        const auto dest = bundle.cross_section(k);
        for (std::size_t j = 0; j < dest.size(); ++j) {
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < dest.size(); ++m)
                if (m != j) gap = std::min(gap, std::abs(dest[j] - dest[m]));
            CHECK(std::abs(bundle.paths[j][k] - bundle.paths[j][k - 1]) <= 0.5 * gap + 1e-12);
        }
    }
}

TEST_CASE("no crossings and consistent labelling at n = 50", "[trajectories][track][property][montecarlo]") {
    struct Outcome {
        bool separated = false;
        bool consistent = false;
    };
    const int trials = 100;
    const auto outcomes = parallel_trials(trials, [](int trial) {
        const auto inst = lab::make_instance(ModelKind::AntiHermitian, 50, {34, std::uint64_t(trial)});
        const auto coarse = track(inst.model, inst.base, 0.0, 3.0, 30);
        const auto fine = track(inst.model, inst.base, 0.0, 3.0, 60);
        bool same = true;
        for (Index j = 0; j < coarse.path_count(); ++j)
            same = same && std::abs(coarse.paths[j].back() - fine.paths[j].back()) < 1e-9;
        return Outcome{coarse.min_gap > 1e-8, same};
    });
    int separated = 0;
    int consistent = 0;
    for (const auto& o : outcomes) {
        separated += o.separated;
        consistent += o.consistent;
    }
    CHECK(separated >= 99);
    CHECK(consistent >= 99);
}

TEST_CASE("velocities on trivial inputs", "[trajectories][velocity]") {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = 2.0;
    const auto add = ModelConfig::additive(unit(2, 0), unit(2, 0));
    const auto pp = phase_point(add, g, 0.0);
    for (std::size_t j = 0; j < 2; ++j) {
        const Complex expected = std::abs(pp.positions[j] - 1.0) < 1e-12 ? 1.0 : 0.0;
        CHECK(std::abs(pp.velocities[j] - expected) < 1e-14);
    }

    const auto ah = ModelConfig::anti_hermitian(unit(1, 0));
    const auto vel = initial_velocities(ah, Matrix::Zero(1, 1));
    REQUIRE(vel.size() == 1);
    CHECK(std::abs(vel[0] - 1.0i) < 1e-15);
}

TEST_CASE("velocities match central finite differences", "[trajectories][velocity]") {
    const double h = 1e-4;
    for (auto kind : {ModelKind::Additive, ModelKind::AntiHermitian, ModelKind::Multiplicative}) {
        const auto inst = lab::make_instance(kind, 5, {35, 0});
        const double t0 = kind == ModelKind::Multiplicative ? 0.4 : 0.0;
        const auto pp = phase_point(inst.model, inst.base, t0);
        const auto plus = to_std(eigenvalues(build_matrix(inst.model, inst.base, t0 + h)));
        const auto minus = to_std(eigenvalues(build_matrix(inst.model, inst.base, t0 - h)));
        const auto pp_plus = match_sets(pp.positions, plus);
        const auto pp_minus = match_sets(pp.positions, minus);
        for (std::size_t j = 0; j < pp.positions.size(); ++j) {
            const Complex fd = (plus[static_cast<std::size_t>(pp_plus[j])] -
                                minus[static_cast<std::size_t>(pp_minus[j])]) / (2.0 * h);
            CHECK(std::abs(fd - pp.velocities[j]) < 1e-6);
        }
    }
    const auto inst = lab::make_instance(ModelKind::Additive, 5, {35, 0});
    const auto v0 = initial_velocities(inst.model, inst.base);
    const auto va = velocities_at(inst.model, inst.base, 0.0);
    for (std::size_t j = 0; j < v0.size(); ++j) CHECK(std::abs(v0[j] - va[j]) < 1e-15);
}

TEST_CASE("ODE residual on exact paths", "[trajectories][ode]") {
    const auto scalar = track(ModelConfig::additive(unit(1, 0), unit(1, 0)), Matrix::Zero(1, 1), 0.0, 1.0, 10);
    for (double r : pooled(ode_residual(scalar))) CHECK(r == 0.0);

    // [[0, 1], [t, 0]] has eigenvalues ±√t.
    Matrix g = Matrix::Zero(2, 2);
    g(0, 1) = 1.0;
    const auto model = ModelConfig::additive(unit(2, 1), unit(2, 0));
    const auto bundle = track(model, g, 1.0, 2.0, 1000);
    for (std::size_t k = 0; k < bundle.grid.size(); k += 50) {
        const double root = std::sqrt(bundle.grid[k]);
        for (const auto& p : bundle.paths) CHECK(std::abs(std::abs(p[k]) - root) < 1e-12);
    }
    const auto res = ode_residual(bundle);
    CHECK(res.grid_index.size() == 999);
    for (double r : pooled(res)) CHECK(r <= 1e-4);
}

TEST_CASE("ODE residual is small and second order at n = 20", "[trajectories][ode][property]") {
    const auto inst = lab::make_instance(ModelKind::Additive, 20, {7, 0});
    const auto coarse = track(inst.model, inst.base, 2.0, 3.0, 100);
    const auto fine = track(inst.model, inst.base, 2.0, 3.0, 200);
    const double m_coarse = median(pooled(ode_residual(coarse)));
    const double m_fine = median(pooled(ode_residual(fine)));
    CHECK(m_fine <= 1e-3);
    const double ratio = m_coarse / m_fine;
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
}

TEST_CASE("ODE residual refuses near-collisions", "[trajectories][ode][errors]") {
    TrajectoryBundle b;
    b.grid = {0.0, 0.1, 0.2};
    b.paths = {{0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}};
    b.min_gap = 0.5;
    CHECK(kind_of([&] { ode_residual(b); }) == ErrorKind::GapTooSmall);
}

TEST_CASE("RK4 integration", "[trajectories][ode][integrate]") {
    const std::vector<Complex> x0{Complex(0.3, -0.2)};
    const std::vector<Complex> v0{Complex(1.5, 0.5)};
    const auto line = integrate_ode(x0, v0, 0.0, 2.0, 0.3);
    CHECK(line.grid.back() == 2.0);
    for (std::size_t k = 0; k < line.grid.size(); ++k)
        CHECK(std::abs(line.paths[0][k] - (x0[0] + v0[0] * line.grid[k])) < 1e-14);

    const auto inst = lab::make_instance(ModelKind::Additive, 5, {36, 0});
    const auto start = phase_point(inst.model, inst.base, 2.0);
    const auto run = integrate_ode(start.positions, start.velocities, 2.0, 2.5, 1e-3);
    const auto direct = to_std(eigenvalues(build_matrix(inst.model, inst.base, 2.5)));
    std::vector<Complex> end(5);
    for (std::size_t j = 0; j < 5; ++j) end[j] = run.paths[j].back();
    const auto p = match_sets(end, direct);
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(end[j] - direct[static_cast<std::size_t>(p[j])]) <= 1e-4 * 0.5);

    // Integrating back from the exact phase point at 2.5 returns to the start.
    const auto exact_end = phase_point(inst.model, inst.base, 2.5);
    const auto q = match_sets(end, exact_end.positions);
    std::vector<Complex> back_v(5);
    for (std::size_t j = 0; j < 5; ++j) back_v[j] = exact_end.velocities[static_cast<std::size_t>(q[j])];
    const auto forward = integrate_ode(end, back_v, 2.5, 2.0, 1e-3);
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(forward.paths[j].back() - start.positions[j]) < 1e-6);
}

TEST_CASE("RK4 refuses to pass through a collision", "[trajectories][ode][integrate][errors]") {
    const std::vector<Complex> x0{-1.0, 1.0};
    const std::vector<Complex> v0{1.0, -1.0};
    CHECK(kind_of([&] { integrate_ode(x0, v0, 0.0, 2.0, 0.01); }) == ErrorKind::CollisionAbort);
}

TEST_CASE("large-t limits", "[trajectories][limits]") {
    Matrix g = Matrix::Zero(2, 2);
    g(1, 1) = 1.0;
    const Vector v = Vector::Constant(2, 1.0 / std::sqrt(2.0));
    const auto two = large_t_limits(ModelConfig::additive(v, v), g);
    REQUIRE(two.limits.size() == 1);
    CHECK(std::abs(two.limits[0] - 0.5) < 1e-12);
    CHECK(std::abs(two.escape_rate - 1.0) < 1e-12);

    const Index n = 7;
    const Matrix h = sample_gue(n, {37, 0});
    const auto ah = large_t_limits(ModelConfig::anti_hermitian(unit(n, 0)), h);
    const auto minor = hermitian_eigenvalues(h.bottomRightCorner(n - 1, n - 1));
    const auto got = sorted(ah.limits);
    REQUIRE(got.size() == static_cast<std::size_t>(n - 1));
    const auto full = hermitian_eigenvalues(h);
    for (Index k = 0; k < n - 1; ++k) {
        CHECK(std::abs(got[static_cast<std::size_t>(k)] - minor(k)) < 1e-12);
        CHECK(minor(k) >= full(k) - 1e-12);
        CHECK(minor(k) <= full(k + 1) + 1e-12);
    }
    CHECK(std::abs(ah.escape_rate - 1.0i) < 1e-15);

    const auto inst = lab::make_instance(ModelKind::Additive, 10, {38, 0});
    const auto lim = large_t_limits(inst.model, inst.base);
    const double t = 1e6;
    auto spec = to_std(eigenvalues(build_matrix(inst.model, inst.base, t)));
    const auto big = std::max_element(spec.begin(), spec.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    CHECK(std::abs(*big / t - lim.escape_rate) < 1e-3);
    spec.erase(big);
    const auto p = match_sets(lim.limits, spec);
    for (std::size_t j = 0; j < lim.limits.size(); ++j)
        CHECK(std::abs(lim.limits[j] - spec[static_cast<std::size_t>(p[j])]) < 1e-3);

    const auto mult = lab::make_instance(ModelKind::Multiplicative, 5, {38, 0});
    CHECK(kind_of([&] { large_t_limits(mult.model, mult.base); }) == ErrorKind::KindMismatch);
}
