#include "rmtlab/gaf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "rmtlab/error.hpp"

namespace rmtlab {

namespace {

constexpr int kMaxArgDepth = 40;

// Coefficients of g − c with trailing zeros removed.
std::vector<Complex> shifted_polynomial(const GafSample& gaf, Complex c) {
    std::vector<Complex> a = gaf.coefficients;
    if (a.empty()) fail(ErrorKind::InvalidTruncation, "empty coefficient list");
    a[0] -= c;
    while (!a.empty() && a.back() == Complex{}) a.pop_back();
    if (a.empty()) fail(ErrorKind::DegenerateInput, "g − c vanishes identically");
    return a;
}

Complex horner(const std::vector<Complex>& a, Complex z) {
    Complex acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double phase_increment(const std::vector<Complex>& a, double r, double th0, double th1, Complex f0, Complex f1,
                       int depth) {
    const double step = std::arg(f1 / f0);
    if (std::abs(step) <= std::numbers::pi / 4.0 || depth >= kMaxArgDepth) return step;
    const double mid = 0.5 * (th0 + th1);
    const Complex fm = horner(a, std::polar(r, mid));
    return phase_increment(a, r, th0, mid, f0, fm, depth + 1) + phase_increment(a, r, mid, th1, fm, f1, depth + 1);
}

int winding(const std::vector<Complex>& a, double r, int points) {
    const double dtheta = 2.0 * std::numbers::pi / points;
    Complex f_prev = horner(a, Complex{r, 0.0});
    const Complex f_start = f_prev;
    double total = 0.0;
    for (int k = 1; k <= points; ++k) {
        const double th = k * dtheta;
        const Complex f = k == points ? f_start : horner(a, std::polar(r, th));
        if (f == Complex{}) fail(ErrorKind::CountMismatch, "g − c vanishes on the contour");
        total += phase_increment(a, r, th - dtheta, th, f_prev, f, 0);
        f_prev = f;
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

void check_radius(double r) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::InvalidArgument, "radius must lie in (0, 1)");
}

}  // namespace

Complex GafSample::evaluate(Complex z) const { return horner(coefficients, z); }

GafSample GafSample::shifted() const {
    GafSample out;
    out.coefficients.reserve(coefficients.size() + 1);
    out.coefficients.push_back(0.0);
    out.coefficients.insert(out.coefficients.end(), coefficients.begin(), coefficients.end());
    return out;
}

GafSample sample_gaf(Index truncation, const SeedSpec& seed) {
    if (truncation < 2) fail(ErrorKind::InvalidTruncation, "truncation must be >= 2");
    Rng rng(seed);
    GafSample out;
    out.coefficients.resize(static_cast<std::size_t>(truncation));
    for (auto& c : out.coefficients) c = rng.complex_normal();
    return out;
}

Index minimum_truncation(double r) {
    check_radius(r);
    const double k = std::log(1e-6 * (1.0 - r)) / std::log(r);
    return std::max<Index>(2, static_cast<Index>(std::ceil(k)));
}

int argument_principle_count(const GafSample& gaf, Complex c, double r, int points) {
    check_radius(r);
    if (points < 8) fail(ErrorKind::InvalidArgument, "need at least 8 contour points");
    return winding(shifted_polynomial(gaf, c), r, points);
}

std::vector<Complex> gaf_zeros(const GafSample& gaf, Complex c, double r) {
    check_radius(r);
    if (gaf.truncation() < minimum_truncation(r)) {
        fail(ErrorKind::TruncationTooSmall, "truncation " + std::to_string(gaf.truncation()) + " below " +
                                                std::to_string(minimum_truncation(r)) + " for radius " +
                                                std::to_string(r));
    }
    const auto a = shifted_polynomial(gaf, c);
    std::vector<Complex> inside;
    const Index degree = static_cast<Index>(a.size()) - 1;
    if (degree >= 1) {
        Matrix companion = Matrix::Zero(degree, degree);
        for (Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
        const Complex lead = a.back();
        for (Index i = 0; i < degree; ++i) companion(i, degree - 1) = -a[static_cast<std::size_t>(i)] / lead;
        const Vector roots = eigenvalues(companion);
        for (Index i = 0; i < roots.size(); ++i) {
            if (std::abs(roots(i)) <= r) inside.push_back(roots(i));
        }
    }
    const int expected = winding(a, r, 4096);
    if (expected != static_cast<int>(inside.size())) {
        fail(ErrorKind::CountMismatch, "companion roots give " + std::to_string(inside.size()) +
                                           " zeros, argument principle gives " + std::to_string(expected));
    }
    return inside;
}

std::vector<AnnulusComparison> compare_clouds(std::span<const std::vector<Complex>> sample_a,
                                              std::span<const std::vector<Complex>> sample_b,
                                              std::span<const std::pair<double, double>> annuli) {
    if (sample_a.size() < 100 || sample_b.size() < 100) {
        fail(ErrorKind::InsufficientTrials, "compare_clouds needs at least 100 sets per side");
    }
    auto stats = [](std::span<const std::vector<Complex>> sets, double inner, double outer) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& set : sets) {
            double count = 0.0;
            for (const Complex z : set) {
                const double m = std::abs(z);
                if (m >= inner && m < outer) count += 1.0;
            }
            sum += count;
            sum_sq += count * count;
        }
        const double n = static_cast<double>(sets.size());
        const double mean = sum / n;
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        return std::pair{mean, std::sqrt(var / n)};
    };
    std::vector<AnnulusComparison> out;
    for (const auto& [inner, outer] : annuli) {
        AnnulusComparison row{.inner = inner, .outer = outer};
        std::tie(row.mean_a, row.stderr_a) = stats(sample_a, inner, outer);
        std::tie(row.mean_b, row.stderr_b) = stats(sample_b, inner, outer);
        const double se = std::hypot(row.stderr_a, row.stderr_b);
        const double diff = row.mean_a - row.mean_b;
        if (se > 0.0) {
            row.z_score = diff / se;
        } else {
            row.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace rmtlab
