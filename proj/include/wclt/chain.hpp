#pragma once

#include <cstdint>
#include <vector>

#include "wclt/matrix.hpp"
#include "wclt/semicircle.hpp"

namespace wclt {

// One slot of a resolvent chain: the spectral parameter of G(z_j) together
// with the deterministic matrix A_j standing to its right.
struct ChainLink {
    SpectralPoint pt;
    MatPtr mat;
};

using Chain = std::vector<ChainLink>;

inline ChainLink link(cplx z, MatPtr a) { return ChainLink{SpectralPoint::at(z), a}; }

inline int traceless_count(const Chain& c) {
    int a = 0;
    for (const auto& l : c)
        if (l.mat->kind() == DetMat::Kind::traceless) ++a;
    return a;
}

inline int chain_dim(const Chain& c) { return c.empty() ? 0 : c.front().mat->n(); }

inline double eta_star(const Chain& c) {
    double e = std::numeric_limits<double>::infinity();
    for (const auto& l : c) e = std::min(e, std::abs(l.pt.z.imag()));
    return e;
}

inline Chain rotated(const Chain& c, int r) {
    Chain out;
    const int k = static_cast<int>(c.size());
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(c[(i + r) % k]);
    return out;
}

// chain' with <chain'> = conj(<chain>): reversed spectral parameters with
// adjoint matrices shifted by one slot.
inline Chain conjugate_chain(const Chain& c) {
    const int k = static_cast<int>(c.size());
    Chain out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        int zi = (k - 1 - i);                // z_k, z_{k-1}, ..., z_1
        int ai = (zi - 1 + k) % k;           // A_{k-1}, ..., A_1, A_k
        out.push_back(link(std::conj(c[zi].pt.z), c[ai].mat->adjoint()));
    }
    return out;
}

}  // namespace wclt
