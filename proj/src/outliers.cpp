#include "rmtlab/outliers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/error.hpp"
#include "rmtlab/models.hpp"
#include "rmtlab/parallel.hpp"

namespace rmtlab {

namespace {

constexpr double kStripSlack = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

bool contains(const Region& region, Complex z) {
    return std::visit(Overloaded{
                          [&](const Disk& d) { return std::abs(z - d.center) <= d.radius; },
                          [&](const Strip& s) { return z.imag() >= s.lower && z.imag() < s.upper; },
                          [&](const Annulus& a) {
                              const double r = std::abs(z - a.center);
                              return r >= a.inner && r <= a.outer;
                          },
                      },
                      region);
}

std::string describe(const Region& region) {
    std::ostringstream out;
    out.precision(6);
    std::visit(Overloaded{
                   [&](const Disk& d) { out << "disk(" << d.center.real() << "+" << d.center.imag() << "i, " << d.radius << ")"; },
                   [&](const Strip& s) { out << "strip(" << s.lower << " <= Im z < " << s.upper << ")"; },
                   [&](const Annulus& a) {
                       out << "annulus(" << a.center.real() << "+" << a.center.imag() << "i, " << a.inner << ", " << a.outer << ")";
                   },
               },
               region);
    return out.str();
}

double separation_distance(const Disk& d1, const Region& d2) {
    return std::visit(Overloaded{
                          [&](const Disk& d) { return std::abs(d1.center - d.center) - d1.radius - d.radius; },
                          [&](const Strip& s) {
                              const double y = d1.center.imag();
                              if (y >= s.upper) return y - d1.radius - s.upper;
                              if (y < s.lower) return s.lower - y - d1.radius;
                              return -d1.radius;
                          },
                          [&](const Annulus& a) {
                              const double d = std::abs(d1.center - a.center);
                              return std::max(a.inner - d - d1.radius, d - d1.radius - a.outer);
                          },
                      },
                      d2);
}

SeparationReport detect_separation(std::span<const Complex> spectrum, const Disk& d1, const Region& d2,
                                   int expected_outliers) {
    SeparationReport report;
    report.d1 = d1;
    report.d2 = d2;
    report.margin = separation_distance(d1, d2);
    if (!(report.margin > 0.0)) {
        fail(ErrorKind::OverlappingDomains, "D1 " + describe(d1) + " meets D2 " + describe(d2));
    }
    double best = std::numeric_limits<double>::infinity();
    for (const Complex z : spectrum) {
        if (contains(d1, z)) {
            ++report.outlier_count;
            const double r = std::abs(z - d1.center);
            if (r < best) {
                best = r;
                report.outlier = z;
            }
        } else if (contains(d2, z)) {
            ++report.in_d2;
        } else {
            ++report.elsewhere;
        }
    }
    report.satisfied = report.outlier_count == expected_outliers && report.elsewhere == 0;
    return report;
}

MusicalDomains musical_domains(Index n, double t, double epsilon) {
    if (n < 1) fail(ErrorKind::InvalidDimension, "n must be >= 1");
    if (!(t > 1.0)) fail(ErrorKind::RegimeViolation, "musical-chairs domains need t > 1");
    const double nd = static_cast<double>(n);
    const double gap = t - 1.0 / t;
    const double scale = std::pow(nd, epsilon);
    MusicalDomains out;
    out.d1 = Disk{Complex{0.0, gap}, scale / std::sqrt(nd * gap)};
    out.d2 = Strip{-kStripSlack, scale / (nd * gap)};
    out.degenerate = separation_distance(out.d1, out.d2) <= 0.0 || t - 1.0 <= std::pow(nd, -1.0 / 3.0 + epsilon);
    return out;
}

bool UaDomain::contains(Complex z) const {
    const double r = std::abs(z);
    if (!(r < 1.0)) return false;
    return n_pow_epsilon * r * r / (1.0 - r) < std::abs(c1) * std::abs(z - z_t);
}

UaDomain ua_domain(Index n, double t, double epsilon, Complex c1) {
    if (n < 1) fail(ErrorKind::InvalidDimension, "n must be >= 1");
    if (!(t != 0.0 && std::abs(t) < 1.0)) fail(ErrorKind::RegimeViolation, "UA domain needs 0 < |t| < 1");
    if (!(std::abs(c1) >= 1e-14)) fail(ErrorKind::DegenerateCoupling, "v^*U^*v vanishes");
    return UaDomain{t / ((1.0 - t) * c1), c1, std::pow(static_cast<double>(n), epsilon)};
}

double local_law_margin(const Matrix& h, const Vector& v, Complex z, double epsilon) {
    if (!(z.imag() > 0.0)) fail(ErrorKind::InvalidArgument, "local law margin needs Im z > 0");
    if (h.rows() != v.size()) fail(ErrorKind::DimensionMismatch, "H and v differ in size");
    const double n = static_cast<double>(h.rows());
    const Complex w = -resolvent_bilinear(h, z, v, v);
    return std::abs(w - msc(z)) * std::sqrt(n * z.imag()) / std::pow(n, epsilon);
}

int count_above(std::span<const Complex> spectrum, double y) {
    int count = 0;
    for (const Complex z : spectrum) count += z.imag() > y ? 1 : 0;
    return count;
}

CountComparison compare_counts(Index n, double t, double y, int trials, std::uint64_t master_seed) {
    if (!(y > 0.0)) fail(ErrorKind::InvalidArgument, "threshold y must be positive");
    if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be >= 1");
    const double predicted = expected_count(n, t, y);
    const auto counts = parallel_trials(static_cast<std::size_t>(trials), [&](std::size_t trial) {
        const SeedSpec seed{master_seed, trial, streams::base};
        const Matrix h = sample_gue(n, seed);
        const auto model = ModelConfig::anti_hermitian(sample_unit_vector(n, seed.with_stream(streams::v)));
        const auto spectrum = to_std(eigenvalues(build_matrix(model, h, t)));
        return static_cast<double>(count_above(spectrum, y));
    });
    CountComparison out;
    out.trials = trials;
    out.predicted = predicted;
    double sum = 0.0, sum_sq = 0.0;
    for (const double c : counts) {
        sum += c;
        sum_sq += c * c;
    }
    out.empirical_mean = sum / trials;
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - trials * out.empirical_mean * out.empirical_mean) / (trials - 1));
        out.standard_error = std::sqrt(var / trials);
    }
    return out;
}

}  // namespace rmtlab
