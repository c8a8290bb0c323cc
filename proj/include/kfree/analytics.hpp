#pragma once

// Zeta values, theoretical densities and entropies, and empirical density
// tables.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "kfree/arithmetic.hpp"
#include "kfree/errors.hpp"
#include "kfree/point_set.hpp"

namespace kfree {

struct ZetaValue {
    double value;
    double error_bound;  ///< first omitted Euler-Maclaurin term
    i64 terms;           ///< N, the length of the explicit partial sum
};

/// Euler-Maclaurin evaluation of zeta(s) with the explicit sum cut at N.
inline ZetaValue zeta_at(double s, i64 N) {
    if (!(s > 1.0)) throw DomainError("zeta needs s > 1");
    if (N < 2) throw DomainError("zeta truncation must be at least 2");
    // small terms first for accuracy
    long double sum = 0;
    for (i64 n = N - 1; n >= 1; --n) sum += std::pow(static_cast<long double>(n), -static_cast<long double>(s));
    const long double Nl = static_cast<long double>(N);
    const long double ls = s;
    sum += std::pow(Nl, 1 - ls) / (ls - 1) + std::pow(Nl, -ls) / 2;
    // B_2/2!, B_4/4!, B_6/6!, B_8/8!
    static constexpr long double kCoef[] = {1.0L / 12, -1.0L / 720, 1.0L / 30240, -1.0L / 1209600};
    long double rising = ls;  // s (s+1) ... (s+2j-2)
    long double power = std::pow(Nl, -ls - 1);
    long double omitted = 0;
    for (int j = 0; j < 4; ++j) {
        const long double term = kCoef[j] * rising * power;
        if (j < 3) sum += term;
        else omitted = std::fabs(term);
        rising *= (ls + 2 * j + 1) * (ls + 2 * j + 2);
        power /= Nl * Nl;
    }
    return {static_cast<double>(sum), static_cast<double>(omitted) + 1e-16 * static_cast<double>(sum), N};
}

/// zeta(s) with absolute error at most tol.
inline ZetaValue zeta(double s, double tol = 1e-14) {
    if (s < 1.5) throw DomainError("zeta: s must be at least 1.5");
    if (!(tol >= 1e-14)) throw DomainError("zeta: tolerance below 1e-14");
    for (i64 N = 16; N <= (i64{1} << 24); N *= 2) {
        const ZetaValue z = zeta_at(s, N);
        if (z.error_bound <= tol) return z;
    }
    throw ResourceError("zeta: tolerance not reached");
}

enum class Provenance { paper, derived, extension };

inline std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::paper: return "paper";
        case Provenance::derived: return "derived";
        case Provenance::extension: return "extension";
    }
    return "?";
}

struct Theoretical {
    double value;
    Provenance provenance;
    std::optional<i64> truncation;  ///< norm bound of a truncated Euler product
};

inline constexpr i64 kEulerTruncation = 100'000;

/// Truncated Euler product over canonical primes with |N(pi)| <= N.
inline double ring_euler_product(RingId ring, int k, i64 N) {
    long double prod = 1;
    for (const RingPrime& rp : primes_up_to_norm(make_ring(ring), N))
        prod *= 1 - std::pow(static_cast<long double>(rp.abs_norm), -static_cast<long double>(k));
    return static_cast<double>(prod);
}

inline Theoretical theoretical_density(const VSpec& spec, i64 truncation = kEulerTruncation) {
    spec.validate();
    switch (spec.kind) {
        case SetKind::visible:
            if (spec.d < 2) throw DomainError("visible points need d >= 2");
            return {1.0 / zeta(spec.d).value, Provenance::paper, std::nullopt};
        case SetKind::kfree_lattice: return {1.0 / zeta(spec.k * spec.d).value, Provenance::derived, std::nullopt};
        case SetKind::bfree_lattice: {
            if (!spec.is_erdos()) throw DomainError("density of a non-coprime B is not supported");
            long double prod = 1;
            for (i64 b : spec.B) prod *= 1 - std::pow(static_cast<long double>(b), -static_cast<long double>(spec.d));
            return {static_cast<double>(prod), Provenance::derived, std::nullopt};
        }
        case SetKind::kfree_ring:
            return {ring_euler_product(spec.ring, spec.k, truncation), Provenance::extension, truncation};
    }
    throw DomainError("unsupported set");
}

/// Topological entropy density * log 2.
inline Theoretical entropy(const VSpec& spec, i64 truncation = kEulerTruncation) {
    spec.validate();
    if (spec.kind == SetKind::visible && spec.d < 2) throw DomainError("entropy of visible points needs d >= 2");
    Theoretical t = theoretical_density(spec, truncation);
    t.value *= std::log(2.0);
    if (spec.kind == SetKind::kfree_lattice) t.provenance = Provenance::paper;
    if (spec.kind == SetKind::bfree_lattice) t.provenance = Provenance::extension;
    return t;
}

struct DensityReport {
    VSpec spec;
    std::vector<i64> radii;
    std::vector<Density> empirical;
    Theoretical theoretical;
    std::vector<double> relative_errors;
};

/// Empirical densities over concentric boxes from one sieve at the largest radius.
inline DensityReport density_report(const VSpec& spec, std::vector<i64> radii, unsigned threads = 1) {
    spec.validate();
    if (radii.empty()) throw DomainError("at least one radius is required");
    for (i64 r : radii)
        if (r < 1) throw DomainError("radii must be at least 1");
    DensityReport rep{spec, radii, {}, theoretical_density(spec), {}};
    const i64 rmax = *std::max_element(radii.begin(), radii.end());
    const PointSet full = sieve(spec, Box{spec.d, rmax}, threads);
    for (i64 r : radii) {
        const Density dn = density(restrict_to(full, r));
        rep.empirical.push_back(dn);
        rep.relative_errors.push_back(std::fabs(dn.value - rep.theoretical.value) / rep.theoretical.value);
    }
    return rep;
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

/// CSV with header spec,radius,empirical,theoretical,rel_error,provenance.
inline std::string to_csv(const DensityReport& rep) {
    std::string out = "spec,radius,empirical,theoretical,rel_error,provenance\n";
    for (std::size_t i = 0; i < rep.radii.size(); ++i) {
        out += "\"" + describe(rep.spec) + "\"," + std::to_string(rep.radii[i]) + "," + format_double(rep.empirical[i].value) +
               "," + format_double(rep.theoretical.value) + "," + format_double(rep.relative_errors[i]) + "," +
               std::string(provenance_name(rep.theoretical.provenance)) + "\n";
    }
    return out;
}

}  // namespace kfree
