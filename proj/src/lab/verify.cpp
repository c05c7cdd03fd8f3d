#include "rmtlab/lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/error.hpp"
#include "rmtlab/gaf.hpp"
#include "rmtlab/lab/experiments.hpp"
#include "rmtlab/models.hpp"
#include "rmtlab/outliers.hpp"
#include "rmtlab/overlaps.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/trajectories.hpp"

namespace rmtlab::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Records = std::vector<CheckRecord>;
using Cloud = std::vector<std::vector<Complex>>;

std::string num(double x) { return fmt::format("{:.4g}", x); }

CheckRecord at_most(int c, std::string name, double stat, double limit) {
    return {c, std::move(name), stat, "<= " + num(limit), stat <= limit, true};
}

CheckRecord at_least(int c, std::string name, double stat, double limit) {
    return {c, std::move(name), stat, ">= " + num(limit), stat >= limit, true};
}

CheckRecord below(int c, std::string name, double stat, double limit) {
    return {c, std::move(name), stat, "< " + num(limit), stat < limit, true};
}

CheckRecord between(int c, std::string name, double stat, double lo, double hi) {
    return {c, std::move(name), stat, "in [" + num(lo) + ", " + num(hi) + "]", stat >= lo && stat <= hi, true};
}

CheckRecord diagnostic(CheckRecord r) {
    r.gating = false;
    return r;
}

std::uint64_t seed_for(const VerifyOptions& o, int criterion, int part = 0) {
    return SeedSpec{o.seed, static_cast<std::uint64_t>(criterion), static_cast<std::uint64_t>(100 + part)}.derived_seed();
}

double frequency(int trials, const std::function<bool(std::size_t)>& predicate) {
    const auto hits = parallel_trials(static_cast<std::size_t>(trials), [&](std::size_t i) { return predicate(i) ? 1 : 0; });
    double sum = 0.0;
    for (const int h : hits) sum += h;
    return sum / trials;
}

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
    }
    return m;
}

std::vector<Complex> spectrum(const Instance& inst, double t) {
    return to_std(eigenvalues(build_matrix(inst.model, inst.base, t)));
}

// Largest |a_i − b_p(i)| under the optimal matching.
double matched_distance(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) return kInf;
    const auto perm = match_sets(a, b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[static_cast<std::size_t>(perm[i])]));
    return worst;
}

// ---------------------------------------------------------------- criterion 1

Records exact_identities(const VerifyOptions& o) {
    Records out;
    const std::uint64_t s = seed_for(o, 1);

    double sylvester = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng(SeedSpec{s, i, 0});
        const Index n = 1 + static_cast<Index>(i % 8);
        const Index d = 1 + static_cast<Index>((i / 8) % 3);
        const Matrix a = gaussian_matrix(rng, n, d);
        const Matrix b = gaussian_matrix(rng, d, n);
        const auto pair = sylvester_check(a, b);
        sylvester = std::max(sylvester, std::abs(pair.lhs - pair.rhs) / std::max(1.0, std::abs(pair.lhs)));
    }
    out.push_back(at_most(1, "sylvester: max relative |det(I+AB) - det(I+BA)|, 100 instances", sylvester, 1e-10));

    constexpr Index n = 50;
    double trace = 0.0;
    double det = 0.0;
    double bio = 0.0;
    double row_sum = 0.0;
    double min_diag = kInf;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const SeedSpec seed{s, 1000 + i, 0};
        Rng rng(seed.with_stream(streams::extra));
        const double t_ah = 0.1 + 4.9 * rng.uniform();
        const Instance ah = make_instance(ModelKind::AntiHermitian, n, seed);
        double im_sum = 0.0;
        for (const Complex z : spectrum(ah, t_ah)) im_sum += z.imag();
        trace = std::max(trace, std::abs(im_sum - t_ah));

        double t_ua = -1.0 + 2.0 * rng.uniform();
        if (std::abs(t_ua) < 0.05) t_ua = 0.05;
        const Instance ua = make_instance(ModelKind::Multiplicative, n, seed);
        double log_abs = 0.0;
        for (const Complex z : spectrum(ua, t_ua)) log_abs += std::log(std::abs(z));
        det = std::max(det, std::abs(std::exp(log_abs) - std::abs(t_ua)) / std::abs(t_ua));

        const Instance add = make_instance(ModelKind::Additive, 30, seed);
        const EigenSystem es = eigen_decompose(build_matrix(add.model, add.base, 1.0 + rng.uniform()));
        bio = std::max(bio, (es.lefts * es.rights - Matrix::Identity(es.size(), es.size())).cwiseAbs().maxCoeff());
        const Matrix ov = overlap_matrix(es);
        row_sum = std::max(row_sum, (ov.rowwise().sum().array() - 1.0).abs().maxCoeff());
        min_diag = std::min(min_diag, ov.diagonal().real().minCoeff());
    }
    out.push_back(at_most(1, "trace: max |sum Im lambda - t|, anti-Hermitian n=50", trace, 1e-9 * n));
    out.push_back(at_most(1, "determinant: max relative |prod |lambda| - |t||, multiplicative n=50", det, 1e-8));
    out.push_back(at_most(1, "biorthogonality: max |LR - I|, n=30", bio, 1e-8));
    out.push_back(at_most(1, "overlap row sums: max |sum_j O_ij - 1|", row_sum, 1e-7));
    out.push_back(at_least(1, "overlap diagonal: min O_ii", min_diag, 1.0 - 1e-8));
    return out;
}

// ---------------------------------------------------------------- criterion 2

Records level_sets(const VerifyOptions& o) {
    Records out;
    const ModelKind kinds[] = {ModelKind::Additive, ModelKind::AntiHermitian, ModelKind::Multiplicative};
    for (int k = 0; k < 3; ++k) {
        const std::uint64_t s = seed_for(o, 2, k);
        const auto errors = parallel_trials(50, [&](std::size_t i) {
            const Index n = 2 + static_cast<Index>(i % 19);
            const SeedSpec seed{s, i, 0};
            Rng rng(seed.with_stream(streams::extra));
            const double u = rng.uniform();
            double t = 0.0;
            switch (kinds[k]) {
                case ModelKind::Additive: t = (i % 2 == 0 ? 1.0 : -1.0) * (0.5 + 2.5 * u); break;
                case ModelKind::AntiHermitian: t = 0.2 + 2.8 * u; break;
                case ModelKind::Multiplicative: t = -0.9 + 1.8 * u; break;
            }
            const Instance inst = make_instance(kinds[k], n, seed);
            const Complex target = level_target(kinds[k], t);
            double worst = 0.0;
            try {
                for (const Complex z : spectrum(inst, t)) {
                    worst = std::max(worst, std::abs(spectral_function(inst.model, inst.base, z) - target));
                }
            } catch (const LabError&) {
                worst = kInf;
            }
            return worst;
        });
        out.push_back(at_most(2, "level set " + to_string(kinds[k]) + ": max |f(lambda) - target|, 50 instances n<=20",
                              *std::max_element(errors.begin(), errors.end()), 1e-7));
    }
    return out;
}

// ---------------------------------------------------------------- criterion 3

Records additive_outlier(const VerifyOptions& o) {
    const std::uint64_t s = seed_for(o, 3);
    constexpr Index n = 100;
    constexpr double t = 20.0;
    const double freq = frequency(200, [&](std::size_t i) {
        const Instance inst = make_instance(ModelKind::Additive, n, {s, i, 0}, WMode::SameAsV);
        int count = 0;
        Complex outlier;
        for (const Complex z : spectrum(inst, t)) {
            if (std::abs(z) > 1.2) {
                ++count;
                outlier = z;
            }
        }
        return count == 1 && std::abs(outlier - t) <= 1.0;
    });
    return {at_least(3, "n=100, t=20, w=v: one |lambda|>1.2 and |lambda_1-20|<=1 (frequency, 200 trials)", freq, 0.95)};
}

// ---------------------------------------------------------------- criterion 4

Records musical_chairs(const VerifyOptions& o) {
    Records out;
    constexpr Index n = 100;
    const std::uint64_t s = seed_for(o, 4);
    const double super = frequency(200, [&](std::size_t i) {
        const Instance inst = make_instance(ModelKind::AntiHermitian, n, {s, i, 0});
        auto sp = spectrum(inst, 2.0);
        const auto top = std::max_element(sp.begin(), sp.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); });
        const Complex lead = *top;
        sp.erase(top);
        double rest = -kInf;
        for (const Complex z : sp) rest = std::max(rest, z.imag());
        return std::abs(lead - Complex{0.0, 1.5}) <= 0.3 && rest <= 0.15;
    });
    out.push_back(at_least(4, "n=100, t=2: |lambda_1-1.5i|<=0.3 and max_{j>=2} Im<=0.15 (frequency, 200 trials)", super, 0.95));
    const std::uint64_t s2 = seed_for(o, 4, 1);
    const double sub = frequency(200, [&](std::size_t i) {
        const Instance inst = make_instance(ModelKind::AntiHermitian, n, {s2, i, 0});
        double top = -kInf;
        for (const Complex z : spectrum(inst, 0.5)) top = std::max(top, z.imag());
        return top <= 0.1;
    });
    out.push_back(at_least(4, "n=100, t=0.5: max Im lambda<=0.1 (frequency, 200 trials)", sub, 0.95));
    return out;
}

// ---------------------------------------------------------------- criterion 5

bool ua_single_outlier(const Instance& inst, double t) {
    int inner = 0;
    int middle = 0;
    for (const Complex z : spectrum(inst, t)) {
        const double r = std::abs(z);
        if (r <= 0.6) {
            ++inner;
        } else if (r < 0.85) {
            ++middle;
        }
    }
    return inner == 1 && middle == 0;
}

Records ua_separation(const VerifyOptions& o) {
    Records out;
    constexpr Index n = 250;
    const double nd = static_cast<double>(n);
    const std::uint64_t s = seed_for(o, 5);
    const double t_small = std::pow(nd, -0.7);
    const double freq = frequency(200, [&](std::size_t i) {
        return ua_single_outlier(make_instance(ModelKind::Multiplicative, n, {s, i, 0}), t_small);
    });
    out.push_back(at_least(5, "n=250, t=n^-0.7: one |lambda|<=0.6, rest >=0.85 (frequency, 200 trials)", freq, 0.95));
    const std::uint64_t s2 = seed_for(o, 5, 1);
    const double t_big = 5.0 / std::sqrt(nd);
    const double contrast = frequency(200, [&](std::size_t i) {
        return ua_single_outlier(make_instance(ModelKind::Multiplicative, n, {s2, i, 0}), t_big);
    });
    out.push_back(below(5, "contrast n=250, t=5 n^-1/2: same event (frequency, 200 trials)", contrast, 0.95));
    return out;
}

// ---------------------------------------------------------------- criterion 6

Records bessel_count(const VerifyOptions& o) {
    const auto cmp = compare_counts(100, 1.0, 0.03, 500, seed_for(o, 6));
    Records out;
    out.push_back(between(6, "n=100, t=1, y=0.03: empirical / predicted mean count (500 trials)",
                          cmp.empirical_mean / cmp.predicted, 0.5, 2.0));
    out.push_back(diagnostic(between(6, "predicted mean count (1/y) e^{-2ny} I1(2ny)", cmp.predicted, 5.0, 5.15)));
    out.push_back(diagnostic(at_least(6, "empirical mean count", cmp.empirical_mean, 0.0)));
    return out;
}

// ---------------------------------------------------------------- criterion 7

const std::vector<std::pair<double, double>>& annuli() {
    static const std::vector<std::pair<double, double>> a{{0.0, 0.5}, {0.5, 0.7}, {0.7, 0.85}};
    return a;
}

void push_cloud_records(Records& out, const std::string& label, const Cloud& a, const Cloud& b, bool gating) {
    for (const auto& row : compare_clouds(a, b, annuli())) {
        CheckRecord r = at_most(7, fmt::format("{} annulus [{}, {}): |z| (means {:.3f} vs {:.3f})", label, row.inner, row.outer,
                                               row.mean_a, row.mean_b),
                                std::abs(row.z_score), 3.0);
        r.gating = gating;
        out.push_back(r);
    }
}

Records gaf_match(const VerifyOptions& o) {
    Records out;
    constexpr int trials = 200;
    constexpr double radius = 0.9;
    const Index k = minimum_truncation(radius);

    // (a) inverted additive outliers at mu = 2, n = 200.
    {
        constexpr Index n = 200;
        const double mu = 2.0;
        const double t = mu * std::sqrt(static_cast<double>(n));
        const std::uint64_t s = seed_for(o, 7, 0);
        const Cloud inverted = parallel_trials(trials, [&](std::size_t i) {
            const Instance inst = make_instance(ModelKind::Additive, n, {s, i, 0});
            std::vector<Complex> pts;
            for (const Complex z : spectrum(inst, t)) {
                if (std::abs(z) > 1.05) pts.push_back(1.0 / z);
            }
            return pts;
        });
        const std::uint64_t sg = seed_for(o, 7, 1);
        const auto gafs = parallel_trials(trials, [&](std::size_t i) { return sample_gaf(k, {sg, i, streams::gaf}); });
        const Cloud literal = parallel_trials(trials, [&](std::size_t i) { return gaf_zeros(gafs[i], 1.0 / mu, radius); });
        const Cloud shifted =
            parallel_trials(trials, [&](std::size_t i) { return gaf_zeros(gafs[i].shifted(), 1.0 / mu, radius); });
        push_cloud_records(out, "7a inverted additive outliers vs zeros of g - 1/mu:", inverted, literal, true);
        push_cloud_records(out, "7a diagnostic, vs zeros of u g(u) - 1/mu:", inverted, shifted, false);
    }

    // (b) UA spectra at t = 2 n^-1/2, n = 250.
    {
        constexpr Index n = 250;
        const double mu = 2.0;
        const double t = mu / std::sqrt(static_cast<double>(n));
        const std::uint64_t s = seed_for(o, 7, 2);
        const Cloud ua = parallel_trials(trials, [&](std::size_t i) {
            return spectrum(make_instance(ModelKind::Multiplicative, n, {s, i, 0}), t);
        });
        const std::uint64_t sg = seed_for(o, 7, 3);
        const auto gafs = parallel_trials(trials, [&](std::size_t i) { return sample_gaf(k, {sg, i, streams::gaf}); });
        const Cloud matched =
            parallel_trials(trials, [&](std::size_t i) { return gaf_zeros(gafs[i].shifted(), mu, radius); });
        const Cloud literal = parallel_trials(trials, [&](std::size_t i) { return gaf_zeros(gafs[i], mu, radius); });
        push_cloud_records(out, "7b UA spectra vs zeros of z g(z) - mu:", ua, matched, true);
        push_cloud_records(out, "7b diagnostic, vs zeros of g - mu:", ua, literal, false);
    }
    return out;
}

// ---------------------------------------------------------------- criterion 8

Records gaf_sanity(const VerifyOptions& o) {
    constexpr int trials = 2000;
    constexpr double radius = 0.5;
    const Index k = 2 * minimum_truncation(radius);
    const std::uint64_t s = seed_for(o, 8);
    struct Outcome {
        double count = 0.0;
        int mismatch = 0;
    };
    const auto outcomes = parallel_trials(trials, [&](std::size_t i) {
        Outcome r;
        try {
            r.count = static_cast<double>(gaf_zeros(sample_gaf(k, {s, i, streams::gaf}), 0.0, radius).size());
        } catch (const LabError& e) {
            if (e.kind() != ErrorKind::CountMismatch) throw;
            r.mismatch = 1;
        }
        return r;
    });
    double sum = 0.0;
    int mismatches = 0;
    for (const auto& r : outcomes) {
        sum += r.count;
        mismatches += r.mismatch;
    }
    const double expected = radius * radius / (1.0 - radius * radius);
    return {between(8, "mean zero count of g in |z|<=0.5 (2000 trials)", sum / trials, expected - 0.05, expected + 0.05),
            at_most(8, "samples where argument principle != root count", mismatches, 0.0)};
}

// ---------------------------------------------------------------- criterion 9

Records ode_checks(const VerifyOptions& o) {
    Records out;

    // Residual of the trajectory equation along tracked paths.
    {
        const std::uint64_t s = seed_for(o, 9, 0);
        std::vector<double> pooled;
        int used = 0;
        for (std::uint64_t i = 0; i < 20 && used < 4; ++i) {
            const Instance inst = make_instance(ModelKind::Additive, 20, {s, i, 0});
            try {
                const auto bundle = track(inst.model, inst.base, 2.0, 3.0, 1000);
                const auto res = ode_residual(bundle);
                for (const auto& path : res.residuals) pooled.insert(pooled.end(), path.begin(), path.end());
                ++used;
            } catch (const LabError& e) {
                if (e.kind() != ErrorKind::GapTooSmall && e.kind() != ErrorKind::RefinementExhausted) throw;
            }
        }
        double median = kInf;
        if (!pooled.empty()) {
            std::nth_element(pooled.begin(), pooled.begin() + static_cast<long>(pooled.size() / 2), pooled.end());
            median = pooled[pooled.size() / 2];
        }
        out.push_back(at_most(9, fmt::format("median relative residual, n=20 additive, t in [2,3], h=1e-3 ({} runs)", used),
                              median, 1e-3));
    }

    // RK4 endpoint against direct diagonalization.
    {
        const std::uint64_t s = seed_for(o, 9, 1);
        double worst = 0.0;
        int used = 0;
        for (std::uint64_t i = 0; i < 40 && used < 10; ++i) {
            const Instance inst = make_instance(ModelKind::Additive, 5, {s, i, 0});
            const auto bundle = track(inst.model, inst.base, 2.0, 2.5, 50);
            if (bundle.min_gap < 0.05) continue;
            const PhasePoint start = phase_point(inst.model, inst.base, 2.0);
            const auto integrated = integrate_ode(start.positions, start.velocities, 2.0, 2.5, 1e-3);
            worst = std::max(worst, matched_distance(integrated.cross_section(integrated.grid.size() - 1), spectrum(inst, 2.5)));
            ++used;
        }
        if (used == 0) worst = kInf;
        out.push_back(at_most(9, fmt::format("RK4 endpoint error vs eigensolver, n=5, t in [2,2.5] ({} spans)", used), worst, 1e-4));
    }

    // First-order velocities against central differences.
    {
        const std::uint64_t s = seed_for(o, 9, 2);
        constexpr double h = 1e-4;
        double worst = 0.0;
        for (std::uint64_t i = 0; i < 10; ++i) {
            const Instance inst = make_instance(ModelKind::Additive, 5, {s, i, 0});
            const PhasePoint p = phase_point(inst.model, inst.base, 0.0);
            const auto plus = spectrum(inst, h);
            const auto minus = spectrum(inst, -h);
            const auto pp = match_sets(p.positions, plus);
            const auto pm = match_sets(p.positions, minus);
            for (std::size_t j = 0; j < p.positions.size(); ++j) {
                const Complex fd = (plus[static_cast<std::size_t>(pp[j])] - minus[static_cast<std::size_t>(pm[j])]) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - p.velocities[j]));
            }
        }
        out.push_back(at_most(9, "velocity formula vs central difference h=1e-4, n=5", worst, 1e-6));
    }
    return out;
}

// ---------------------------------------------------------------- criterion 10

// Σ_j c_j Π_{k≠j}(z − λ_k), ascending coefficients.
std::vector<Complex> numerator_polynomial(const Vector& lambda, const Vector& c) {
    const Index n = lambda.size();
    std::vector<Complex> total(static_cast<std::size_t>(n), 0.0);
    for (Index j = 0; j < n; ++j) {
        std::vector<Complex> poly{c(j)};
        for (Index k = 0; k < n; ++k) {
            if (k == j) continue;
            std::vector<Complex> next(poly.size() + 1, 0.0);
            for (std::size_t m = 0; m < poly.size(); ++m) {
                next[m + 1] += poly[m];
                next[m] -= lambda(k) * poly[m];
            }
            poly = std::move(next);
        }
        for (std::size_t m = 0; m < poly.size(); ++m) total[m] += poly[m];
    }
    return total;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& a) {
    const Index degree = static_cast<Index>(a.size()) - 1;
    Matrix companion = Matrix::Zero(degree, degree);
    for (Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (Index i = 0; i < degree; ++i) companion(i, degree - 1) = -a[static_cast<std::size_t>(i)] / a.back();
    return to_std(eigenvalues(companion));
}

Records large_t(const VerifyOptions& o) {
    Records out;
    constexpr double t = 1e6;
    {
        constexpr Index n = 50;
        const std::uint64_t s = seed_for(o, 10, 0);
        double imag = 0.0, match = 0.0, interlace = 0.0;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const Instance inst = make_instance(ModelKind::AntiHermitian, n, {s, i, 0});
            auto sp = spectrum(inst, t);
            sp.erase(std::max_element(sp.begin(), sp.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); }));
            std::sort(sp.begin(), sp.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
            const auto limits = large_t_limits(inst.model, inst.base).limits;
            const Eigen::VectorXd h = hermitian_eigenvalues(inst.base);
            for (std::size_t k = 0; k < sp.size(); ++k) {
                imag = std::max(imag, std::abs(sp[k].imag()));
                match = std::max(match, std::abs(sp[k] - limits[k]));
                const double mu = limits[k].real();
                interlace = std::max({interlace, h(static_cast<Index>(k)) - mu, mu - h(static_cast<Index>(k) + 1)});
            }
        }
        out.push_back(at_most(10, "anti-Hermitian n=50, t=1e6: max |Im| of non-outlier eigenvalues", imag, 1e-3));
        out.push_back(at_most(10, "anti-Hermitian: max distance to v-complement compression spectrum", match, 1e-3));
        out.push_back(at_most(10, "anti-Hermitian: interlacing violation of limits against Sp(H)", interlace, 1e-9));
    }
    {
        constexpr Index n = 10;
        const std::uint64_t s = seed_for(o, 10, 1);
        double roots = 0.0, direct = 0.0;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const Instance inst = make_instance(ModelKind::Additive, n, {s, i, 0});
            const auto limits = large_t_limits(inst.model, inst.base).limits;
            const EigenSystem es = eigen_decompose(inst.base);
            const Vector c = (es.lefts * inst.model.v).cwiseProduct((inst.model.w.adjoint() * es.rights).transpose());
            roots = std::max(roots, matched_distance(limits, polynomial_roots(numerator_polynomial(es.values, c))));
            auto sp = spectrum(inst, t);
            sp.erase(std::max_element(sp.begin(), sp.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); }));
            direct = std::max(direct, matched_distance(limits, sp));
        }
        out.push_back(at_most(10, "additive n=10: limits vs roots of the numerator polynomial", roots, 1e-3));
        out.push_back(at_most(10, "additive n=10: limits vs eigenvalues at t=1e6", direct, 1e-3));
    }
    return out;
}

// ---------------------------------------------------------------- criterion 11

Records local_law(const VerifyOptions& o) {
    constexpr Index n = 200;
    const std::uint64_t s = seed_for(o, 11);
    const Complex z{2.5, 0.5};
    const double freq = frequency(200, [&](std::size_t i) {
        const SeedSpec seed{s, i, 0};
        const Matrix h = sample_gue(n, seed.with_stream(streams::base));
        const Vector v = sample_unit_vector(n, seed.with_stream(streams::v));
        return local_law_margin(h, v, z, 0.1) <= 1.0;
    });
    return {at_least(11, "n=200 GUE, z=2.5+0.5i, eps=0.1: margin<=1 (frequency, 200 trials)", freq, 0.95)};
}

// ---------------------------------------------------------------- criterion 12

Records ensemble_stats(const VerifyOptions& o) {
    Records out;
    constexpr Index n = 200;
    const double nd = static_cast<double>(n);
    const std::uint64_t s = seed_for(o, 12, 0);
    const auto fractions = parallel_trials(20, [&](std::size_t i) {
        const Eigen::VectorXd e = hermitian_eigenvalues(sample_gue(n, {s, i, streams::base}));
        return static_cast<double>((e.array().abs() <= 1.0).count()) / nd;
    });
    double mass = 0.0;
    for (const double f : fractions) mass += f;
    mass /= static_cast<double>(fractions.size());
    // (1/2π) ∫_{-1}^{1} √(4 − x²) dx in closed form.
    const double semicircle = (std::sqrt(3.0) + 2.0 * std::numbers::pi / 3.0) / (2.0 * std::numbers::pi);
    out.push_back(between(12, "GUE n=200: fraction of eigenvalues in [-1,1] (20 trials)", mass, semicircle - 0.03,
                          semicircle + 0.03));

    const std::uint64_t s2 = seed_for(o, 12, 1);
    constexpr double r = 0.9;
    struct Row {
        double inside;
        double beyond;
    };
    const auto rows = parallel_trials(50, [&](std::size_t i) {
        const auto sp = to_std(eigenvalues(sample_ginibre(n, {s2, i, streams::base})));
        Row row{0.0, 0.0};
        for (const Complex z : sp) {
            row.inside += std::abs(z) <= 1.05 ? 1.0 : 0.0;
            row.beyond += std::abs(z) > r ? 1.0 : 0.0;
        }
        row.inside /= nd;
        return row;
    });
    double inside = 0.0, sum = 0.0, sum_sq = 0.0;
    for (const auto& row : rows) {
        inside += row.inside;
        sum += row.beyond;
        sum_sq += row.beyond * row.beyond;
    }
    const double m = static_cast<double>(rows.size());
    out.push_back(at_least(12, "Ginibre n=200: mean fraction with |lambda|<=1.05 (50 trials)", inside / m, 0.99));
    const double mean = sum / m;
    const double stderr_ = std::sqrt(std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)) / m);
    const double expected = kostlan_expected_exceedances(n, r);
    out.push_back(at_most(12, fmt::format("Kostlan: |mean #{{|lambda|>0.9}} - {:.3f}| in stderr units", expected),
                          std::abs(mean - expected) / stderr_, 3.0));
    return out;
}

struct Suite {
    int criterion;
    const char* name;
    const char* title;
    Records (*run)(const VerifyOptions&);
};

const std::vector<Suite>& suites() {
    static const std::vector<Suite> list{
        {1, "identities", "exact identities", exact_identities},
        {2, "level-sets", "level-set equivalence", level_sets},
        {3, "additive-outlier", "single additive outlier at desk scale", additive_outlier},
        {4, "musical-chairs", "anti-Hermitian outlier and subcritical contrast", musical_chairs},
        {5, "ua-separation", "multiplicative strongly separated outlier", ua_separation},
        {6, "bessel-count", "Bessel count of eigenvalues above Im z = y", bessel_count},
        {7, "gaf-match", "outlier clouds vs GAF zero clouds", gaf_match},
        {8, "gaf-sanity", "GAF zero count and argument principle", gaf_sanity},
        {9, "ode", "trajectory equation", ode_checks},
        {10, "large-t", "large-t limits", large_t},
        {11, "local-law", "isotropic local law proxy", local_law},
        {12, "ensembles", "ensemble statistics", ensemble_stats},
    };
    return list;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : suites()) out.emplace_back(s.name);
        out.emplace_back("all");
        return out;
    }();
    return names;
}

std::vector<CheckRecord> run_suite(const std::string& suite, const VerifyOptions& options) {
    Records out;
    bool found = false;
    for (const auto& s : suites()) {
        if (suite != "all" && suite != s.name) continue;
        found = true;
        auto records = s.run(options);
        out.insert(out.end(), records.begin(), records.end());
    }
    if (!found) fail(ErrorKind::InvalidConfig, "unknown verify suite '" + suite + "'");
    return out;
}

bool criterion_passes(const std::vector<CheckRecord>& records, int criterion) {
    bool any = false;
    for (const auto& r : records) {
        if (r.criterion != criterion || !r.gating) continue;
        any = true;
        if (!r.pass) return false;
    }
    return any;
}

bool all_pass(const std::vector<CheckRecord>& records) {
    for (const auto& r : records) {
        if (r.gating && !r.pass) return false;
    }
    return true;
}

void print_report(std::ostream& out, const std::vector<CheckRecord>& records) {
    std::map<int, std::vector<const CheckRecord*>> grouped;
    for (const auto& r : records) grouped[r.criterion].push_back(&r);
    for (const auto& [criterion, group] : grouped) {
        std::string title;
        for (const auto& s : suites()) {
            if (s.criterion == criterion) title = s.title;
        }
        out << fmt::format("{} criterion {:>2}: {}\n", criterion_passes(records, criterion) ? "PASS" : "FAIL", criterion, title);
        for (const auto* r : group) {
            const char* tag = !r->gating ? "info" : (r->pass ? "ok  " : "FAIL");
            out << fmt::format("      {} {} = {:.6g} ({})\n", tag, r->name, r->statistic, r->threshold);
        }
    }
}

std::string records_to_json(const std::vector<CheckRecord>& records) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json e;
        e["criterion"] = r.criterion;
        e["name"] = r.name;
        if (std::isfinite(r.statistic)) {
            e["statistic"] = r.statistic;
        } else {
            e["statistic"] = std::isnan(r.statistic) ? "nan" : (r.statistic > 0 ? "inf" : "-inf");
        }
        e["threshold"] = r.threshold;
        e["pass"] = r.pass;
        e["gating"] = r.gating;
        doc.push_back(e);
    }
    return doc.dump(2);
}

}  // namespace rmtlab::lab
