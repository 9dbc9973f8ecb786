#include "sts/gf.hpp"

#include <stdexcept>
#include <string>

namespace sts {

namespace {

// Pinned primitive polynomials over GF(2), indexed by m. These are the
// conventional defaults (lowest-weight primitive polynomial per degree),
// e.g. m=9 is x^9 + x^4 + 1.
constexpr GfElem kPrimPolys[17] = {
    0,      0,      0x7,    0xB,    0x13,   0x25,   0x43,   0x89,
    0x11D,  0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003,
    0x1100B,
};

}  // namespace

GaloisField::GaloisField(unsigned m) {
    if (m < 2 || m > 16) {
        throw std::invalid_argument("GaloisField: m must be in [2, 16], got " + std::to_string(m));
    }
    m_ = m;
    order_ = GfElem{1} << m;
    prim_poly_ = kPrimPolys[m];

    const GfElem group_order = order_ - 1;
    log_.assign(order_, 0);
    antilog_.assign(2 * group_order, 0);

    // alpha^k by repeated shift-and-reduce; primitivity means we must not
    // return to 1 before k = S - 1.
    GfElem value = 1;
    for (GfElem k = 0; k < group_order; ++k) {
        if (k > 0 && value == 1) {
            throw std::logic_error("GaloisField: pinned polynomial is not primitive for m = " +
                                   std::to_string(m));
        }
        antilog_[k] = value;
        antilog_[k + group_order] = value;
        log_[value] = k;
        value <<= 1;
        if (value & order_) value ^= prim_poly_;
    }
    if (value != 1) {
        throw std::logic_error("GaloisField: alpha does not have order S - 1 for m = " +
                               std::to_string(m));
    }
}

GfElem GaloisField::inv(GfElem a) const {
    if (a == 0) throw std::domain_error("GaloisField::inv: zero has no inverse");
    const GfElem group_order = order_ - 1;
    return antilog_[(group_order - log_[a]) % group_order];
}

GfElem GaloisField::pow(GfElem a, std::uint64_t e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    return antilog_[(log_[a] * (e % (order_ - 1))) % (order_ - 1)];
}

unsigned GaloisField::log(GfElem a) const {
    if (a == 0) throw std::domain_error("GaloisField::log: log of zero is undefined");
    return log_[a];
}

GfPoly::GfPoly(std::vector<GfElem> c) : coeffs(std::move(c)) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

GfPoly poly_add(const GfPoly& p, const GfPoly& q) {
    std::vector<GfElem> out(std::max(p.coeffs.size(), q.coeffs.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = p.coeff(i) ^ q.coeff(i);
    }
    return GfPoly(std::move(out));
}

GfPoly poly_mul(const GaloisField& f, const GfPoly& p, const GfPoly& q) {
    if (p.is_zero() || q.is_zero()) return GfPoly::zero();
    std::vector<GfElem> out(p.coeffs.size() + q.coeffs.size() - 1, 0);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        if (p.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < q.coeffs.size(); ++j) {
            out[i + j] ^= f.mul(p.coeffs[i], q.coeffs[j]);
        }
    }
    return GfPoly(std::move(out));
}

GfPolyDivMod poly_divmod(const GaloisField& f, const GfPoly& p, const GfPoly& g) {
    if (g.is_zero()) throw std::domain_error("poly_divmod: division by zero polynomial");
    if (p.degree() < g.degree()) return {GfPoly::zero(), p};

    std::vector<GfElem> rem = p.coeffs;
    std::vector<GfElem> quot(p.coeffs.size() - g.coeffs.size() + 1, 0);
    const GfElem lead_inv = f.inv(g.coeffs.back());
    for (std::size_t i = rem.size(); i-- >= g.coeffs.size();) {
        if (rem[i] == 0) continue;
        const GfElem factor = f.mul(rem[i], lead_inv);
        quot[i - (g.coeffs.size() - 1)] = factor;
        for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
            rem[i - (g.coeffs.size() - 1) + j] ^= f.mul(factor, g.coeffs[j]);
        }
    }
    return {GfPoly(std::move(quot)), GfPoly(std::move(rem))};
}

GfPoly poly_mod(const GaloisField& f, const GfPoly& p, const GfPoly& g) {
    return poly_divmod(f, p, g).remainder;
}

GfElem poly_eval(const GaloisField& f, const GfPoly& p, GfElem x) {
    GfElem acc = 0;
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        acc = f.mul(acc, x) ^ p.coeffs[i];
    }
    return acc;
}

}  // namespace sts
