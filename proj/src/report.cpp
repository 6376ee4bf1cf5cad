#include "wclt/report.hpp"

#include <fstream>
#include <sstream>

#include "wclt/errors.hpp"

namespace wclt {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

Json json_complex(cplx v) { return Json{{"re", v.real()}, {"im", v.imag()}}; }

cplx complex_from_json(const Json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    return cplx(j.value("re", 0.0), j.value("im", 0.0));
}

MatPtr matrix_from_json(const Json& j, int n) {
    const std::string kind = j.value("kind", "identity");
    if (kind == "identity") return DetMat::identity(n);
    if (kind == "traceless_diag_pm1")
        return DetMat::traceless_diag_sign(n, j.value("seed", std::uint64_t{0}));
    if (kind == "traceless_offdiag")
        return DetMat::traceless_offdiag(n, j.value("seed", std::uint64_t{0}));
    if (kind == "file") {
        if (!j.contains("path")) throw ValidationError("matrix: file kind needs a path");
        auto m = load_matrix_csv(j["path"].get<std::string>(), j.value("center", false));
        if (m->n() != n)
            throw ValidationError("matrix: file dimension " + std::to_string(m->n()) +
                                  " != chain dimension " + std::to_string(n));
        return m;
    }
    throw ValidationError("matrix: unknown kind '" + kind + "'");
}

Chain chain_from_json(const Json& j) {
    if (!j.contains("links") || !j["links"].is_array())
        throw ValidationError("chain: missing 'links' array");
    if (j["links"].empty()) return {};  // empty chain (valid for covariance arguments)
    const int n = j.value("n", 0);
    if (n < 2) throw ValidationError("chain: need field 'n' >= 2");
    Chain c;
    for (const auto& lj : j["links"]) {
        if (!lj.contains("z")) throw ValidationError("chain link: missing 'z'");
        cplx z = complex_from_json(lj["z"]);
        if (z.imag() == 0.0) throw ValidationError("chain link: Im z must be nonzero");
        MatPtr m = lj.contains("matrix") ? matrix_from_json(lj["matrix"], n) : DetMat::identity(n);
        c.push_back(link(z, m));
    }
    return c;
}

Chain chain_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open chain file " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("chain file " + path + ": " + e.what());
    }
    return chain_from_json(j);
}

EnsembleConfig ensemble_from_json(const Json& j) {
    EnsembleConfig cfg;
    cfg.n = j.value("n", 256);
    const std::string law = j.value("law", "gue");
    if (law == "gue")
        cfg.law = EnsembleConfig::Law::gue;
    else if (law == "uniform_phase")
        cfg.law = EnsembleConfig::Law::uniform_phase;
    else
        throw ValidationError("ensemble: unknown law '" + law + "'");
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.samples = j.value("samples", 400);
    if (cfg.samples < 1) throw ValidationError("ensemble: samples must be positive");
    return cfg;
}

void validate_chain(const Chain& c, bool mc_regime, int n_mc) {
    if (c.empty()) throw ValidationError("chain: empty");
    const int n = chain_dim(c);
    for (const auto& l : c) {
        if (l.mat->n() != n) throw ValidationError("chain: inconsistent matrix dimensions");
        if (l.mat->op_norm_upper() > 10.0)
            throw ValidationError("chain: matrix norm bound ||A|| <= 10 violated");
        if (l.mat->kind() == DetMat::Kind::traceless && std::abs(l.mat->avg()) > 1e-12)
            throw NotTraceless("chain: matrix tagged traceless has |<A>| > 1e-12");
        if (mc_regime && std::abs(l.pt.z.imag()) < 10.0 / static_cast<double>(n_mc))
            throw ValidationError(
                "chain: |Im z| < 10/N is below the local-law comparison scale; "
                "increase |Im z| or N");
    }
}

Json make_manifest(const std::string& command, const Json& config, std::uint64_t seed,
                   const std::vector<std::string>& outputs) {
    Json m;
    m["command"] = command;
    m["config_hash"] = hex64(fnv1a(config.dump()));
    m["seed"] = seed;
    m["version"] = kToolVersion;
    m["outputs"] = outputs;
    return m;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace wclt
