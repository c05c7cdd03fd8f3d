#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "rmtlab/linalg.hpp"

namespace rmtlab {

/// Closed disk |z − center| ≤ radius.
struct Disk {
    Complex center;
    double radius = 0.0;
};

/// Horizontal strip lower ≤ Im z < upper.
struct Strip {
    double lower = 0.0;
    double upper = 0.0;
};

/// inner ≤ |z − center| ≤ outer (outer may be +inf).
struct Annulus {
    Complex center;
    double inner = 0.0;
    double outer = 0.0;
};

using Region = std::variant<Disk, Strip, Annulus>;

bool contains(const Region& region, Complex z);
std::string describe(const Region& region);

/// Signed distance between a disk and a region; positive iff they are disjoint.
double separation_distance(const Disk& d1, const Region& d2);

struct SeparationReport {
    std::optional<Complex> outlier;  // point of D1 closest to its center, if any
    int outlier_count = 0;           // eigenvalues found in D1
    int in_d2 = 0;
    int elsewhere = 0;
    Disk d1;
    Region d2;
    double margin = 0.0;
    bool satisfied = false;
};

/// Classifies the spectrum; satisfied iff exactly `expected_outliers` points lie in D1
/// and all others in D2. Throws OverlappingDomains when the margin is not positive.
SeparationReport detect_separation(std::span<const Complex> spectrum, const Disk& d1, const Region& d2,
                                   int expected_outliers = 1);

struct MusicalDomains {
    Disk d1;
    Strip d2;
    /// Domains are not usable: they overlap, or t − 1 ≤ n^{−1/3 + ε}.
    bool degenerate = false;
};

/// D1 = disk(i(t − 1/t), n^ε / √(n(t − 1/t))), D2 = {0 ≤ Im z < n^ε / (n(t − 1/t))}.
/// The strip's lower edge is relaxed to −1e-10 for rounding. Throws RegimeViolation for t ≤ 1.
MusicalDomains musical_domains(Index n, double t, double epsilon = 0.3);

struct UaDomain {
    Complex z_t;
    Complex c1;
    double n_pow_epsilon = 1.0;

    /// |z| < 1 and n^ε |z|²/(1 − |z|) < |c1| |z − z_t|.
    [[nodiscard]] bool contains(Complex z) const;
};

/// z_t = t / ((1 − t) c1) with c1 = v^*U^*v. Throws RegimeViolation unless 0 < |t| < 1,
/// DegenerateCoupling when |c1| is below 1e-14.
UaDomain ua_domain(Index n, double t, double epsilon, Complex c1);

/// |v^*(H − z)^{-1} v − m_sc(z)| · √(n Im z) / n^ε. Values ≤ 1 mean the bound holds.
double local_law_margin(const Matrix& h, const Vector& v, Complex z, double epsilon);

/// #{λ : Im λ > y}.
int count_above(std::span<const Complex> spectrum, double y);

struct CountComparison {
    double empirical_mean = 0.0;
    double standard_error = 0.0;
    double predicted = 0.0;
    int trials = 0;
};

/// Monte Carlo mean of count_above over GUE + i t v v^* draws versus expected_count.
CountComparison compare_counts(Index n, double t, double y, int trials, std::uint64_t master_seed);

}  // namespace rmtlab
