#include "wclt/noncrossing.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "wclt/errors.hpp"

namespace wclt {

bool is_noncrossing(const NCPartition& p) {
    // crossing: a < b < c < d with {a,c} in one block, {b,d} in another
    std::vector<int> owner(p.n, -1);
    for (size_t b = 0; b < p.blocks.size(); ++b)
        for (int e : p.blocks[b]) owner[e] = static_cast<int>(b);
    for (int a = 0; a < p.n; ++a)
        for (int b = a + 1; b < p.n; ++b)
            for (int c = b + 1; c < p.n; ++c)
                for (int d = c + 1; d < p.n; ++d)
                    if (owner[a] == owner[c] && owner[b] == owner[d] && owner[a] != owner[b])
                        return false;
    return true;
}

namespace {

void enumerate_partitions(int n, std::vector<NCPartition>& out) {
    // restricted growth strings
    std::vector<int> rgs(n, 0);
    auto emit = [&]() {
        NCPartition p;
        p.n = n;
        int m = *std::max_element(rgs.begin(), rgs.end());
        p.blocks.assign(m + 1, {});
        for (int i = 0; i < n; ++i) p.blocks[rgs[i]].push_back(i);
        if (is_noncrossing(p)) out.push_back(std::move(p));
    };
    std::function<void(int, int)> rec = [&](int i, int maxv) {
        if (i == n) {
            emit();
            return;
        }
        for (int v = 0; v <= maxv + 1; ++v) {
            rgs[i] = v;
            rec(i + 1, std::max(maxv, v));
        }
    };
    rec(0, -1);
}

std::mutex g_ncp_mutex;
std::map<int, std::vector<NCPartition>> g_ncp_cache;

std::vector<std::vector<int>> cycles_of(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    std::vector<bool> seen(n, false);
    std::vector<std::vector<int>> cyc;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::vector<int> c;
        int j = i;
        while (!seen[j]) {
            seen[j] = true;
            c.push_back(j);
            j = perm[j];
        }
        cyc.push_back(std::move(c));
    }
    return cyc;
}

std::mutex g_ann_mutex;
std::map<std::pair<int, int>, std::vector<AnnularPermutation>> g_ann_cache;

}  // namespace

const std::vector<NCPartition>& enumerate_ncp(int n) {
    if (n < 1 || n > 10) throw SizeLimit("enumerate_ncp: n must be in [1,10]");
    std::lock_guard<std::mutex> lock(g_ncp_mutex);
    auto it = g_ncp_cache.find(n);
    if (it == g_ncp_cache.end()) {
        std::vector<NCPartition> v;
        enumerate_partitions(n, v);
        it = g_ncp_cache.emplace(n, std::move(v)).first;
    }
    return it->second;
}

NCPartition kreweras(const NCPartition& p) {
    const int n = p.n;
    // partition -> permutation: each block, sorted ascending, is one cycle
    std::vector<int> pi(n);
    for (const auto& b : p.blocks)
        for (size_t i = 0; i < b.size(); ++i) pi[b[i]] = b[(i + 1) % b.size()];
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[pi[i]] = i;
    std::vector<int> kp(n);
    for (int i = 0; i < n; ++i) kp[i] = inv[(i + 1) % n];  // pi^{-1} gamma
    NCPartition out;
    out.n = n;
    for (auto& c : cycles_of(kp)) {
        std::sort(c.begin(), c.end());
        out.blocks.push_back(std::move(c));
    }
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

std::vector<std::vector<int>> annular_kreweras(const AnnularPermutation& p) {
    const int n = p.k + p.l;
    std::vector<int> gamma(n);
    for (int i = 0; i < p.k; ++i) gamma[i] = (i + 1) % p.k;
    for (int i = 0; i < p.l; ++i) gamma[p.k + i] = p.k + (i + 1) % p.l;
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[p.perm[i]] = i;
    std::vector<int> kp(n);
    for (int i = 0; i < n; ++i) kp[i] = inv[gamma[i]];
    return cycles_of(kp);
}

const std::vector<AnnularPermutation>& enumerate_annular(int k, int l) {
    if (k < 1 || l < 1 || k + l > 9) throw SizeLimit("enumerate_annular: need k,l >= 1, k+l <= 9");
    std::lock_guard<std::mutex> lock(g_ann_mutex);
    auto key = std::make_pair(k, l);
    auto it = g_ann_cache.find(key);
    if (it != g_ann_cache.end()) return it->second;

    const int n = k + l;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<AnnularPermutation> out;
    do {
        AnnularPermutation ap;
        ap.k = k;
        ap.l = l;
        ap.perm = perm;
        ap.cycles = cycles_of(perm);
        // through-cycle: some cycle meets both circles
        bool through = false;
        for (const auto& c : ap.cycles) {
            bool lo = false, hi = false;
            for (int e : c) (e < k ? lo : hi) = true;
            if (lo && hi) {
                through = true;
                break;
            }
        }
        if (!through) continue;
        // geodesic condition
        if (static_cast<int>(ap.cycles.size() + annular_kreweras(ap).size()) != n) continue;
        out.push_back(std::move(ap));
    } while (std::next_permutation(perm.begin(), perm.end()));
    it = g_ann_cache.emplace(key, std::move(out)).first;
    return it->second;
}

cplx CumulantTable::first_order(const std::vector<int>& labels) {
    auto it = c1_.find(labels);
    if (it != c1_.end()) return it->second;
    const int n = static_cast<int>(labels.size());
    // h_o[S] = h[S] - sum over NC partitions pi != {S} of prod h_o[B]
    cplx v = m1_(labels);
    for (const auto& p : enumerate_ncp(n)) {
        if (p.blocks.size() == 1) continue;
        cplx term = 1.0;
        for (const auto& b : p.blocks) {
            std::vector<int> sub;
            sub.reserve(b.size());
            for (int i : b) sub.push_back(labels[i]);
            term *= first_order(sub);
        }
        v -= term;
    }
    c1_[labels] = v;
    return v;
}

cplx CumulantTable::second_order(const std::vector<int>& a, const std::vector<int>& b) {
    auto key = std::make_pair(a, b);
    auto it = c2_.find(key);
    if (it != c2_.end()) return it->second;
    const int k = static_cast<int>(a.size());
    const int l = static_cast<int>(b.size());
    std::vector<int> all(a);
    all.insert(all.end(), b.begin(), b.end());
    cplx v = m2_(a, b);
    // subtract the annular sum
    for (const auto& pi : enumerate_annular(k, l)) {
        cplx term = 1.0;
        for (const auto& c : pi.cycles) {
            std::vector<int> sub;
            sub.reserve(c.size());
            for (int i : c) sub.push_back(all[i]);
            term *= first_order(sub);
        }
        v -= term;
    }
    // subtract marked-pair terms except the full marked pair (U1,U2) = (a,b)
    const auto& P1 = enumerate_ncp(k);
    const auto& P2 = enumerate_ncp(l);
    for (const auto& p1 : P1) {
        for (const auto& p2 : P2) {
            for (size_t u1 = 0; u1 < p1.blocks.size(); ++u1) {
                for (size_t u2 = 0; u2 < p2.blocks.size(); ++u2) {
                    if (p1.blocks.size() == 1 && p2.blocks.size() == 1) continue;  // the unknown
                    cplx term = 1.0;
                    std::vector<int> s1, s2;
                    for (int i : p1.blocks[u1]) s1.push_back(a[i]);
                    for (int i : p2.blocks[u2]) s2.push_back(b[i]);
                    term *= second_order(s1, s2);
                    for (size_t j = 0; j < p1.blocks.size(); ++j) {
                        if (j == u1) continue;
                        std::vector<int> sub;
                        for (int i : p1.blocks[j]) sub.push_back(a[i]);
                        term *= first_order(sub);
                    }
                    for (size_t j = 0; j < p2.blocks.size(); ++j) {
                        if (j == u2) continue;
                        std::vector<int> sub;
                        for (int i : p2.blocks[j]) sub.push_back(b[i]);
                        term *= first_order(sub);
                    }
                    v -= term;
                }
            }
        }
    }
    c2_[key] = v;
    c2_[std::make_pair(b, a)] = v;
    return v;
}

}  // namespace wclt
