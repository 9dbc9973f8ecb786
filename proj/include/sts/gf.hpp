#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sts {

using GfElem = std::uint32_t;

/// Arithmetic context for GF(2^m), 2 <= m <= 16. Elements are integers in
/// [0, 2^m) in polynomial basis: bit i is the coefficient of X^i. Addition is
/// XOR; multiplication goes through log/antilog tables built at construction.
///
/// The primitive polynomial for each m is pinned (see kPrimPolys in gf.cpp)
/// so that tone sequences are reproducible across runs and implementations.
/// Primitivity is checked at construction: alpha = 2 must have multiplicative
/// order exactly 2^m - 1.
///
/// Immutable after construction; safe to share across threads.
class GaloisField {
public:
    static constexpr GfElem kAlpha = 2;

    /// Throws std::invalid_argument for m outside [2, 16].
    explicit GaloisField(unsigned m);

    unsigned m() const { return m_; }
    GfElem order() const { return order_; }  // S = 2^m
    GfElem prim_poly() const { return prim_poly_; }

    static GfElem add(GfElem a, GfElem b) { return a ^ b; }

    GfElem mul(GfElem a, GfElem b) const {
        if (a == 0 || b == 0) return 0;
        return antilog_[log_[a] + log_[b]];  // antilog table doubled, no mod needed
    }

    /// Multiplicative inverse; throws std::domain_error for a = 0.
    GfElem inv(GfElem a) const;

    GfElem div(GfElem a, GfElem b) const { return mul(a, inv(b)); }

    GfElem pow(GfElem a, std::uint64_t e) const;

    /// alpha^k with k reduced mod (S - 1).
    GfElem alpha_pow(std::uint64_t k) const { return antilog_[k % (order_ - 1)]; }

    /// Discrete log base alpha; throws std::domain_error for a = 0.
    unsigned log(GfElem a) const;

private:
    unsigned m_;
    GfElem order_;
    GfElem prim_poly_;
    std::vector<std::uint32_t> log_;      // size S; log_[0] unused
    std::vector<GfElem> antilog_;         // size 2(S-1): antilog_[k] = alpha^k
};

/// Polynomial over GF(2^m). coeffs[i] is the coefficient of X^i; trailing
/// zeros are trimmed so the zero polynomial has empty coeffs.
struct GfPoly {
    std::vector<GfElem> coeffs;

    GfPoly() = default;
    explicit GfPoly(std::vector<GfElem> c);

    static GfPoly zero() { return GfPoly{}; }
    static GfPoly one() { return GfPoly({1}); }

    bool is_zero() const { return coeffs.empty(); }
    /// Highest nonzero index, or -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    GfElem coeff(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }

    friend bool operator==(const GfPoly&, const GfPoly&) = default;
};

GfPoly poly_add(const GfPoly& p, const GfPoly& q);
GfPoly poly_mul(const GaloisField& f, const GfPoly& p, const GfPoly& q);

struct GfPolyDivMod {
    GfPoly quotient;
    GfPoly remainder;
};

/// Euclidean division p = q*g + r with deg(r) < deg(g).
/// Throws std::domain_error when g is the zero polynomial.
GfPolyDivMod poly_divmod(const GaloisField& f, const GfPoly& p, const GfPoly& g);
GfPoly poly_mod(const GaloisField& f, const GfPoly& p, const GfPoly& g);

/// Horner evaluation of p at x.
GfElem poly_eval(const GaloisField& f, const GfPoly& p, GfElem x);

}  // namespace sts
