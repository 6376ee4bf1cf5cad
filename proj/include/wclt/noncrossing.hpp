#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace wclt {

// Exact combinatorics for the covariance formulas: non-crossing partitions,
// annular non-crossing permutations, Kreweras complements, and the first and
// second order moment-cumulant inversions.

using Block = std::vector<int>;  // sorted indices

struct NCPartition {
    int n = 0;
    std::vector<Block> blocks;
};

bool is_noncrossing(const NCPartition& p);

// All non-crossing partitions of [n] (0-based ground set {0,...,n-1}), n <= 10.
const std::vector<NCPartition>& enumerate_ncp(int n);

// Kreweras complement via the permutation identity K(pi) = pi^{-1} gamma with
// gamma = (0 1 ... n-1); blocks are the cycles of the product.
NCPartition kreweras(const NCPartition& p);

// Permutation of {0,...,k+l-1} acting on the (k,l)-annulus: outer circle
// [0,k), inner circle [k,k+l).
struct AnnularPermutation {
    int k = 0, l = 0;
    std::vector<int> perm;                  // images, perm[i] = pi(i)
    std::vector<std::vector<int>> cycles;   // cycle decomposition (each cycle starts at its min)
};

// Cycles of pi^{-1} gamma_{k,l} with gamma_{k,l} = (0..k-1)(k..k+l-1): the
// annular Kreweras complement, returned in cycle order (order matters for
// matrix products downstream).
std::vector<std::vector<int>> annular_kreweras(const AnnularPermutation& p);

// All annular non-crossing permutations of the (k,l)-annulus: connected
// (at least one through-cycle) and geodesic, i.e.
// #cycles(pi) + #cycles(pi^{-1} gamma) = k + l.  Cached; k + l <= 9.
const std::vector<AnnularPermutation>& enumerate_annular(int k, int l);

// ---- moment-cumulant machinery -------------------------------------------
//
// Ground elements are abstract labels (ints). Moments are supplied as
// callables on label tuples; cumulants are computed by recursive subtraction
// of the non-crossing (resp. annular) moment sums.

using cplx = std::complex<double>;
using Moment1 = std::function<cplx(const std::vector<int>&)>;
using Moment2 = std::function<cplx(const std::vector<int>&, const std::vector<int>&)>;

class CumulantTable {
  public:
    CumulantTable(Moment1 m1, Moment2 m2) : m1_(std::move(m1)), m2_(std::move(m2)) {}
    explicit CumulantTable(Moment1 m1) : m1_(std::move(m1)) {}

    cplx moment(const std::vector<int>& labels) const { return m1_(labels); }
    cplx moment2(const std::vector<int>& a, const std::vector<int>& b) const { return m2_(a, b); }

    // first-order free cumulant h_o[labels]
    cplx first_order(const std::vector<int>& labels);
    // second-order free cumulant h_oo[a|b], symmetric in its arguments
    cplx second_order(const std::vector<int>& a, const std::vector<int>& b);

  private:
    Moment1 m1_;
    Moment2 m2_;
    std::map<std::vector<int>, cplx> c1_;
    std::map<std::pair<std::vector<int>, std::vector<int>>, cplx> c2_;
};

}  // namespace wclt
