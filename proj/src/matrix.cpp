#include "wclt/matrix.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include "wclt/errors.hpp"
#include "wclt/rng.hpp"

namespace wclt {

namespace {
std::atomic<std::uint64_t> g_next_id{1};

std::shared_ptr<DetMat> make_raw() { return std::make_shared<DetMat>(); }
}  // namespace

const MatrixXc& DetMat::dense_values() const {
    if (!is_diag_) return dense_;
    if (dense_cache_.rows() != n_) {
        dense_cache_ = MatrixXc::Zero(n_, n_);
        dense_cache_.diagonal() = diag_;
    }
    return dense_cache_;
}

VectorXc DetMat::diagonal_part() const {
    if (is_diag_) return diag_;
    return dense_.diagonal();
}

double DetMat::op_norm_upper() const {
    if (is_diag_) return diag_.cwiseAbs().maxCoeff();
    // power iteration on A* A; a few percent accuracy is enough for the
    // ||A|| <= 10 sanity gate
    CounterRng rng(0x51ab5ce5u, id_);
    VectorXc v(n_);
    for (int i = 0; i < n_; ++i) v(i) = cplx(rng.normal(), rng.normal());
    v /= v.norm();
    double s = 0.0;
    for (int it = 0; it < 30; ++it) {
        VectorXc w = dense_.adjoint() * (dense_ * v);
        if (w.norm() == 0.0) return 0.0;
        s = std::sqrt(w.norm());
        v = w / w.norm();
    }
    return s;
}

MatPtr DetMat::identity(int n) {
    auto m = make_raw();
    m->n_ = n;
    m->kind_ = Kind::identity;
    m->is_diag_ = true;
    m->diag_ = VectorXc::Ones(n);
    m->avg_ = 1.0;
    m->id_ = g_next_id.fetch_add(1);
    return m;
}

MatPtr DetMat::diagonal(VectorXc d, Kind kind) {
    auto m = make_raw();
    m->n_ = static_cast<int>(d.size());
    m->kind_ = kind;
    m->is_diag_ = true;
    m->avg_ = d.sum() / static_cast<double>(d.size());
    m->diag_ = std::move(d);
    m->id_ = g_next_id.fetch_add(1);
    if (kind == Kind::traceless && std::abs(m->avg_) > 1e-12)
        throw NotTraceless("DetMat::diagonal: |<A>| exceeds traceless tolerance");
    return m;
}

MatPtr DetMat::dense(MatrixXc a, Kind kind) {
    if (a.rows() != a.cols()) throw ValidationError("DetMat::dense: matrix must be square");
    auto m = make_raw();
    m->n_ = static_cast<int>(a.rows());
    m->kind_ = kind;
    m->is_diag_ = false;
    m->avg_ = a.trace() / static_cast<double>(a.rows());
    m->dense_ = std::move(a);
    m->id_ = g_next_id.fetch_add(1);
    if (kind == Kind::traceless && std::abs(m->avg_) > 1e-12)
        throw NotTraceless("DetMat::dense: |<A>| exceeds traceless tolerance");
    return m;
}

MatPtr DetMat::traceless_diag_sign(int n, std::uint64_t seed) {
    if (n % 2 != 0) throw ValidationError("traceless_diag_sign: need even n for exact trace zero");
    VectorXc d(n);
    // random +-1 pattern with exactly n/2 of each sign
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    CounterRng rng(seed, 0);
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.uniform_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(idx[i], idx[j]);
    }
    for (int i = 0; i < n; ++i) d[idx[i]] = (i < n / 2) ? 1.0 : -1.0;
    return diagonal(std::move(d), Kind::traceless);
}

MatPtr DetMat::traceless_offdiag(int n, std::uint64_t seed) {
    MatrixXc a = MatrixXc::Zero(n, n);
    CounterRng rng(seed, 1);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            cplx v(rng.normal(), rng.normal());
            v /= std::sqrt(2.0);
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    a /= std::sqrt(static_cast<double>(n));  // keeps ||A|| = O(1)
    return dense(std::move(a), Kind::traceless);
}

MatPtr DetMat::adjoint() const {
    if (is_identity()) return identity(n_);
    if (is_diag_) return diagonal(diag_.conjugate(), kind_ == Kind::traceless ? Kind::traceless : Kind::general);
    return dense(dense_.adjoint(), kind_ == Kind::traceless ? Kind::traceless : Kind::general);
}

MatPtr DetMat::traceless_part() const {
    if (is_diag_) {
        VectorXc d = diag_;
        d.array() -= avg_;
        return diagonal(std::move(d), Kind::traceless);
    }
    MatrixXc a = dense_;
    a.diagonal().array() -= avg_;
    return dense(std::move(a), Kind::traceless);
}

MatPtr mat_product(const MatPtr& a, const MatPtr& b) {
    if (a->n() != b->n()) throw ValidationError("mat_product: dimension mismatch");
    if (a->is_identity()) return b;
    if (b->is_identity()) return a;
    if (a->is_diag() && b->is_diag())
        return DetMat::diagonal(a->diag_values().cwiseProduct(b->diag_values()));
    if (a->is_diag())
        return DetMat::dense(a->diag_values().asDiagonal() * b->dense_values());
    if (b->is_diag())
        return DetMat::dense(a->dense_values() * b->diag_values().asDiagonal());
    return DetMat::dense(a->dense_values() * b->dense_values());
}

cplx avg_product(const DetMat& a, const DetMat& b) {
    const int n = a.n();
    if (a.is_diag() && b.is_diag())
        return a.diag_values().cwiseProduct(b.diag_values()).sum() / static_cast<double>(n);
    if (a.is_diag())
        return a.diag_values().cwiseProduct(b.dense_values().diagonal()).sum() /
               static_cast<double>(n);
    if (b.is_diag())
        return b.diag_values().cwiseProduct(a.dense_values().diagonal()).sum() /
               static_cast<double>(n);
    // <AB> = (1/n) sum_{ij} A_ij B_ji
    return (a.dense_values().array() * b.dense_values().transpose().array()).sum() /
           static_cast<double>(n);
}

cplx hadamard_avg(const DetMat& a, const DetMat& b) {
    return a.diagonal_part().cwiseProduct(b.diagonal_part()).sum() / static_cast<double>(a.n());
}

namespace {
cplx parse_complex_entry(std::string tok) {
    // accepts "a", "a+bi", "a-bi", "bi"
    auto strip = [](std::string& s) {
        size_t b = s.find_first_not_of(" \t");
        size_t e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    strip(tok);
    if (tok.empty()) throw ValidationError("matrix csv: empty entry");
    if (tok.back() == 'i' || tok.back() == 'j') {
        tok.pop_back();
        // split at the last +/- that is not an exponent sign
        size_t split = std::string::npos;
        for (size_t p = tok.size(); p-- > 1;) {
            if ((tok[p] == '+' || tok[p] == '-') && tok[p - 1] != 'e' && tok[p - 1] != 'E') {
                split = p;
                break;
            }
        }
        if (split == std::string::npos) return cplx(0.0, std::stod(tok.empty() ? "1" : tok));
        double re = std::stod(tok.substr(0, split));
        std::string ims = tok.substr(split);
        if (ims == "+") ims = "1";
        if (ims == "-") ims = "-1";
        return cplx(re, std::stod(ims));
    }
    return cplx(std::stod(tok), 0.0);
}
}  // namespace

MatPtr load_matrix_csv(const std::string& path, bool center_traceless) {
    std::ifstream in(path);
    if (!in) throw ValidationError("load_matrix_csv: cannot open " + path);
    std::vector<std::vector<cplx>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<cplx> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(parse_complex_entry(tok));
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw ValidationError("load_matrix_csv: empty file " + path);
    MatrixXc a(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw ValidationError("load_matrix_csv: non-square data in " + path);
        for (int j = 0; j < n; ++j) a(i, j) = rows[i][j];
    }
    auto m = DetMat::dense(std::move(a), DetMat::Kind::general);
    if (center_traceless) return m->traceless_part();
    return m;
}

}  // namespace wclt
