#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "wclt/bessel.hpp"
#include "wclt/chain_core.hpp"
#include "wclt/closed_form.hpp"
#include "wclt/errors.hpp"
#include "wclt/kernel.hpp"
#include "wclt/noncrossing.hpp"
#include "wclt/quadrature.hpp"
#include "wclt/report.hpp"
#include "wclt/rng.hpp"
#include "wclt/thermalization.hpp"

namespace {

using namespace wclt;

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("json parse error in ") + path + ": " + e.what());
    }
    return j;
}

int cmd_predict_mean(const std::string& chain_path, int n_for, double kappa4,
                     const std::string& out_path) {
    Json cj = load_json(chain_path);
    Chain chain = chain_from_json(cj);
    validate_chain(chain, false, 0);
    if (chain.size() > 6) throw ValidationError("predict-mean: chain length capped at 6");
    Workspace ws;
    const cplx leading = ws.scalar_m(chain);
    const cplx corr = ws.correction_e(chain);
    Json out;
    out["schema"] = kSchemaVersion;
    out["leading"] = json_complex(leading);
    out["correction"] = json_complex(corr);
    out["kappa4"] = kappa4;
    out["N"] = n_for;
    out["prediction"] = json_complex(leading + kappa4 * corr / static_cast<double>(n_for));
    out["error_order"] = "O(N^eps / (N sqrt(N eta) eta^{k-a/2}))";
    out["manifest"] = make_manifest("predict-mean", cj, 0, {out_path});
    write_json_file(out_path, out);
    std::cout << "predict-mean: wrote " << out_path << "\n";
    return 0;
}

int cmd_predict_cov(const std::string& a_path, const std::string& b_path, double kappa4,
                    const std::string& out_path) {
    Json aj = load_json(a_path);
    Json bj = load_json(b_path);
    Chain alpha = chain_from_json(aj);
    Chain beta = chain_from_json(bj);
    if (!alpha.empty()) validate_chain(alpha, false, 0);
    if (!beta.empty()) validate_chain(beta, false, 0);
    if (alpha.size() + beta.size() > 7)
        throw ValidationError("predict-cov: total chain length capped at 7");
    Workspace ws;
    CovarianceValue v = ws.covariance_m(alpha, beta, kappa4);
    Json out;
    out["schema"] = kSchemaVersion;
    out["total"] = json_complex(v.total);
    out["gue_part"] = json_complex(v.gue_part);
    out["kappa_part"] = json_complex(v.kappa_part);
    out["kappa4"] = kappa4;
    out["method"] = "recursion";
    Json cfg;
    cfg["alpha"] = aj;
    cfg["beta"] = bj;
    out["manifest"] = make_manifest("predict-cov", cfg, 0, {out_path});
    write_json_file(out_path, out);
    std::cout << "predict-cov: wrote " << out_path << "\n";
    return 0;
}

TestFunction testfunction_from_json(const Json& j) {
    TestFunction f;
    const std::string p = j.value("profile", "exp_phase");
    if (p == "gaussian_bump")
        f.profile = gaussian_bump();
    else if (p == "cosine_bump")
        f.profile = cosine_bump();
    else if (p == "exp_phase")
        f.profile = exp_phase(j.value("t", 1.0));
    else if (p == "identity")
        f.profile = poly_identity();
    else if (p == "one")
        f.profile = constant_one();
    else
        throw ValidationError("unknown profile '" + p + "'");
    f.gamma = j.value("gamma", 0.0);
    f.center = j.value("E", 0.0);
    return f;
}

int cmd_predict_funccov(const std::string& spec_path, const std::string& out_path) {
    Json sj = load_json(spec_path);
    const int n = sj.value("n", 2);
    const double n_scale = sj.value("n_scale", 1.0);
    const double quad_tol = sj.value("quad_tol", 1e-8);
    std::vector<TestFunction> afs, bfs;
    std::vector<MatPtr> ams, bms;
    for (const auto& e : sj.at("alpha")) {
        afs.push_back(testfunction_from_json(e));
        ams.push_back(matrix_from_json(e.value("matrix", Json{{"kind", "identity"}}), n));
    }
    for (const auto& e : sj.at("beta")) {
        bfs.push_back(testfunction_from_json(e));
        bms.push_back(matrix_from_json(e.value("matrix", Json{{"kind", "identity"}}), n));
    }
    CovarianceAssembly asm_ = assemble_covariance(afs, ams, bfs, bms, n_scale, quad_tol);
    Json out;
    out["schema"] = kSchemaVersion;
    out["annular_sum"] = json_complex(asm_.annular_sum);
    out["marked_sum"] = json_complex(asm_.marked_sum);
    out["total"] = json_complex(asm_.total);
    Json terms = Json::array();
    for (const auto& t : asm_.terms) {
        Json tj;
        tj["combinatorial"] = t.combinatorial;
        tj["matrix_factor"] = json_complex(t.matrix_factor);
        tj["function_factor"] = json_complex(t.function_factor);
        tj["value"] = json_complex(t.value);
        terms.push_back(tj);
    }
    out["terms"] = terms;
    out["manifest"] = make_manifest("predict-funccov", sj, 0, {out_path});
    write_json_file(out_path, out);
    std::cout << "predict-funccov: wrote " << out_path << "\n";
    return 0;
}

int cmd_mc_verify(const std::string& config_path, const std::string& pred_path,
                  const std::string& out_path, int threads) {
    Json cj = load_json(config_path);
    Json pj = load_json(pred_path);
    EnsembleConfig cfg = ensemble_from_json(cj.at("ensemble"));
    std::vector<MatPtr> pool;
    std::vector<Mode> modes;
    std::vector<std::string> names;
    for (const auto& mj : cj.at("modes")) {
        Json chain_json = mj.at("chain");
        if (!chain_json.contains("n")) chain_json["n"] = cfg.n;
        Chain c = chain_from_json(chain_json);
        validate_chain(c, true, cfg.n);
        if (chain_dim(c) != cfg.n)
            throw ValidationError("mc-verify: chain dimension differs from ensemble n");
        const std::string name = mj.value("name", "mode" + std::to_string(modes.size()));
        modes.push_back(chain_mode(c, pool, name));
        names.push_back(name);
    }
    Sampler sampler(cfg, pool);
    MatrixXc results = sampler.run(modes, threads);
    auto col = [&](const std::string& name) -> std::vector<cplx> {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) {
                std::vector<cplx> v(results.rows());
                for (int s = 0; s < results.rows(); ++s) v[s] = results(s, i);
                return v;
            }
        throw ValidationError("mc-verify: unknown mode '" + name + "' in predictions");
    };
    const double gate_default = pj.value("gate_sigma", 3.0);
    Json verdicts = Json::array();
    bool all_pass = true;
    for (const auto& comp : pj.at("comparisons")) {
        const std::string type = comp.value("type", "mean");
        const double gate = comp.value("gate_sigma", gate_default);
        cplx predicted = comp.contains("predicted") ? complex_from_json(comp["predicted"]) : 0.0;
        Json v;
        v["type"] = type;
        double z = 0.0;
        if (type == "mean" || type == "mean_shift_scaled") {
            auto vals = col(comp.at("mode").get<std::string>());
            BatchStats st = batch_mean(vals);
            cplx measured = st.mean;
            double se = st.se();
            if (type == "mean_shift_scaled") {
                const cplx sub = complex_from_json(comp.at("subtract"));
                const double scale = comp.value("scale", 1.0);
                measured = scale * (measured - sub);
                se *= scale;
            }
            z = std::abs(measured - predicted) / std::max(se, 1e-300);
            v["mode"] = comp.at("mode");
            v["measured"] = json_complex(measured);
            v["se"] = se;
        } else if (type == "cov") {
            auto va = col(comp.at("a").get<std::string>());
            auto vb = col(comp.at("b").get<std::string>());
            PairCovariance pc = pair_covariance(va, vb, cfg.n);
            const std::string form = comp.value("form", "sesquilinear");
            cplx measured = (form == "bilinear") ? pc.bilinear : pc.sesquilinear;
            double se = (form == "bilinear") ? pc.se_bilinear : pc.se_sesquilinear;
            z = std::abs(measured - predicted) / std::max(se, 1e-300);
            v["a"] = comp.at("a");
            v["b"] = comp.at("b");
            v["form"] = form;
            v["measured"] = json_complex(measured);
            v["se"] = se;
        } else if (type == "wick") {
            auto vals = col(comp.at("mode").get<std::string>());
            // wick ratio on centered, N-scaled values
            BatchStats st = batch_mean(vals);
            std::vector<cplx> x(vals.size());
            for (size_t i = 0; i < vals.size(); ++i)
                x[i] = static_cast<double>(cfg.n) * (vals[i] - st.mean);
            WickRatio wr = wick_fourth_ratio(x);
            if (!comp.contains("predicted")) predicted = 1.0;
            z = std::abs(wr.value - predicted.real()) / std::max(wr.se, 1e-300);
            v["mode"] = comp.at("mode");
            v["measured"] = wr.value;
            v["se"] = wr.se;
        } else {
            throw ValidationError("mc-verify: unknown comparison type '" + type + "'");
        }
        const bool pass = z <= gate;
        all_pass = all_pass && pass;
        v["predicted"] = json_complex(predicted);
        v["z"] = z;
        v["gate_sigma"] = gate;
        v["pass"] = pass;
        verdicts.push_back(v);
        std::cout << (pass ? "PASS " : "FAIL ") << type << " z=" << z << "\n";
    }
    Json out;
    out["schema"] = kSchemaVersion;
    out["comparisons"] = verdicts;
    out["all_pass"] = all_pass;
    Json cfg_all;
    cfg_all["config"] = cj;
    cfg_all["predictions"] = pj;
    out["manifest"] = make_manifest("mc-verify", cfg_all, cfg.seed, {out_path});
    write_json_file(out_path, out);
    return all_pass ? 0 : 2;
}

int cmd_thermalize(const std::string& a1_path, const std::string& a2_path, int n, int samples,
                   double tmax, double dt, std::uint64_t seed, const std::string& out_path,
                   int threads) {
    MatPtr a1 = load_matrix_csv(a1_path, true);
    MatPtr a2 = load_matrix_csv(a2_path, true);
    if (a1->n() != n || a2->n() != n)
        throw ValidationError("thermalize: matrix dimension != N");
    std::vector<double> tgrid;
    for (double t = 0.0; t <= tmax + 1e-9; t += dt) tgrid.push_back(t);

    std::vector<MatPtr> pool{a1, a2};
    std::vector<Mode> modes;
    for (double t : tgrid) {
        Mode m;
        m.name = "t=" + std::to_string(t);
        Mode::Slot s1, s2;
        s1.fn = [t](double lam) { return std::exp(cplx(0.0, t * lam)); };
        s1.mat = 0;
        s2.fn = [t](double lam) { return std::exp(cplx(0.0, -t * lam)); };
        s2.mat = 1;
        m.slots = {s1, s2};
        modes.push_back(std::move(m));
    }
    EnsembleConfig cfg;
    cfg.n = n;
    cfg.law = EnsembleConfig::Law::gue;
    cfg.seed = seed;
    cfg.samples = samples;
    Sampler sampler(cfg, pool);
    MatrixXc results = sampler.run(modes, threads);

    Json tcfg;
    tcfg["A1"] = a1_path;
    tcfg["A2"] = a2_path;
    tcfg["N"] = n;
    tcfg["samples"] = samples;
    tcfg["tmax"] = tmax;
    tcfg["dt"] = dt;
    tcfg["seed"] = seed;
    const Json manifest = make_manifest("thermalize", tcfg, seed, {out_path});

    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot write " + out_path);
    out.precision(17);
    out << "# manifest " << manifest.dump() << "\n";
    out << "t,pred_leading_re,pred_leading_im,pred_var_xi,emp_mean_re,emp_mean_im,"
           "emp_mean_se,emp_var_xi,emp_var_se\n";
    const std::string long_path = out_path + ".long.csv";
    std::ofstream lout(long_path);
    lout.precision(17);
    lout << "# manifest " << manifest.dump() << "\n";
    lout << "t,series,value\n";
    for (size_t ti = 0; ti < tgrid.size(); ++ti) {
        ThermalPrediction pred = thermal_prediction(a1, a2, tgrid[ti]);
        std::vector<cplx> vals(results.rows());
        for (int s = 0; s < results.rows(); ++s) vals[s] = results(s, ti);
        BatchStats st = batch_mean(vals);
        PairCovariance pc = pair_covariance(vals, vals, n);
        out << tgrid[ti] << "," << pred.leading.real() << "," << pred.leading.imag() << ","
            << pred.variance << "," << st.mean.real() << "," << st.mean.imag() << ","
            << st.se() << "," << pc.sesquilinear.real() << "," << pc.se_sesquilinear << "\n";
        const double t = tgrid[ti];
        lout << t << ",pred_leading_re," << pred.leading.real() << "\n";
        lout << t << ",pred_var_xi," << pred.variance << "\n";
        lout << t << ",emp_mean_re," << st.mean.real() << "\n";
        lout << t << ",emp_mean_se," << st.se() << "\n";
        lout << t << ",emp_var_xi," << pc.sesquilinear.real() << "\n";
        lout << t << ",emp_var_se," << pc.se_sesquilinear << "\n";
    }
    std::cout << "thermalize: wrote " << out_path << " and " << long_path << "\n";
    return 0;
}

int cmd_enumerate(int ncp_n, int ann_k, int ann_l) {
    if (ncp_n > 0) {
        for (const auto& p : enumerate_ncp(ncp_n)) {
            std::string s;
            for (const auto& b : p.blocks) {
                s += "(";
                for (size_t i = 0; i < b.size(); ++i)
                    s += (i ? " " : "") + std::to_string(b[i] + 1);
                s += ")";
            }
            std::cout << s << "\n";
        }
        return 0;
    }
    if (ann_k > 0 && ann_l > 0) {
        for (const auto& p : enumerate_annular(ann_k, ann_l)) {
            std::string s;
            for (const auto& c : p.cycles) {
                s += "(";
                for (size_t i = 0; i < c.size(); ++i)
                    s += (i ? " " : "") + std::to_string(c[i] + 1);
                s += ")";
            }
            std::cout << s << "\n";
        }
        return 0;
    }
    std::cerr << "enumerate: pass --ncp N or --annular K L\n";
    return 1;
}

int cmd_selftest();

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic predictions and Monte Carlo verification for "
                 "alternating chains of Wigner-matrix functions and deterministic matrices"};
    app.require_subcommand(1);

    std::string chain_path, a_path, b_path, out_path = "out.json", spec_path, pred_path;
    std::string a1_path, a2_path;
    int n_for = 1024, threads = 0, samples = 3000, n_dim = 1024;
    double kappa4 = 0.0, tmax = 8.0, dt = 0.5;
    std::uint64_t seed = 1;
    int ncp_n = 0, ann_k = 0, ann_l = 0;

    auto* pm = app.add_subcommand("predict-mean", "expectation of a resolvent chain");
    pm->add_option("--chain", chain_path)->required();
    pm->add_option("--N", n_for);
    pm->add_option("--kappa4", kappa4);
    pm->add_option("--out", out_path);

    auto* pc = app.add_subcommand("predict-cov", "limiting covariance of two chains");
    pc->add_option("--alpha", a_path)->required();
    pc->add_option("--beta", b_path)->required();
    pc->add_option("--kappa4", kappa4);
    pc->add_option("--out", out_path);

    auto* pf = app.add_subcommand("predict-funccov", "functional closed-form covariance");
    pf->add_option("--spec", spec_path)->required();
    pf->add_option("--out", out_path);

    auto* mv = app.add_subcommand("mc-verify", "Monte Carlo verification against predictions");
    mv->add_option("--config", chain_path)->required();
    mv->add_option("--predictions", pred_path)->required();
    mv->add_option("--out", out_path);
    mv->add_option("--threads", threads);

    auto* th = app.add_subcommand("thermalize", "Heisenberg-evolution trajectory statistics");
    th->add_option("--A1", a1_path)->required();
    th->add_option("--A2", a2_path)->required();
    th->add_option("--N", n_dim);
    th->add_option("--samples", samples);
    th->add_option("--tmax", tmax);
    th->add_option("--dt", dt);
    th->add_option("--seed", seed);
    th->add_option("--out", out_path);
    th->add_option("--threads", threads);

    auto* en = app.add_subcommand("enumerate", "print combinatorial objects");
    en->add_option("--ncp", ncp_n);
    en->add_option("--annular", ann_k);
    en->add_option("--inner", ann_l);

    app.add_subcommand("selftest", "fast invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pm->parsed()) return cmd_predict_mean(chain_path, n_for, kappa4, out_path);
        if (pc->parsed()) return cmd_predict_cov(a_path, b_path, kappa4, out_path);
        if (pf->parsed()) return cmd_predict_funccov(spec_path, out_path);
        if (mv->parsed()) return cmd_mc_verify(chain_path, pred_path, out_path, threads);
        if (th->parsed())
            return cmd_thermalize(a1_path, a2_path, n_dim, samples, tmax, dt, seed, out_path,
                                  threads);
        if (en->parsed()) return cmd_enumerate(ncp_n, ann_k, ann_l);
        return cmd_selftest();
    } catch (const wclt::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

int cmd_selftest() {
    using namespace wclt;
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    // scalar base
    const cplx m2i = stieltjes(cplx(0, 2));
    check("m(2i) = (sqrt2-1)i", std::abs(m2i - cplx(0, std::sqrt(2.0) - 1.0)) < 1e-12);
    bool dyson_ok = true;
    CounterRng rng(2024, 0);
    for (int i = 0; i < 200; ++i) {
        cplx z(4.0 * rng.uniform() - 2.0, (rng.uniform() + 0.05) * (i % 2 ? 1.0 : -1.0));
        cplx m = stieltjes(z);
        if (std::abs(m * m + z * m + 1.0) > 1e-12) dyson_ok = false;
        if (m.imag() * z.imag() <= 0.0) dyson_ok = false;
    }
    check("Dyson residual on random bulk points", dyson_ok);

    // divided differences: permutation invariance
    std::vector<cplx> zs{{0.3, 0.9}, {-0.5, 1.4}, {0.2, -1.1}};
    cplx base = divided_difference(zs);
    std::swap(zs[0], zs[2]);
    check("divided difference permutation invariance",
          std::abs(divided_difference(zs) - base) < 1e-12);

    // combinatorics
    check("|NCP(5)| = 42", enumerate_ncp(5).size() == 42);
    check("|NCP->(1,1)| = 1", enumerate_annular(1, 1).size() == 1);
    bool kw = true;
    for (const auto& p : enumerate_ncp(5))
        if (p.blocks.size() + kreweras(p).blocks.size() != 6) kw = false;
    check("Kreweras block counts at n=5", kw);

    // covariance base case against the explicit k=l=1 formula
    {
        const int n = 8;
        Workspace ws;
        auto a1 = DetMat::traceless_offdiag(n, 5);
        auto a2 = DetMat::traceless_diag_sign(n, 6);
        Chain alpha{link(cplx(0.4, 0.8), a1)};
        Chain beta{link(cplx(-0.2, 1.1), a2)};
        auto v = ws.covariance_m(alpha, beta, -1.0);
        const cplx m1 = alpha[0].pt.m, mm2 = beta[0].pt.m;
        const cplx m1p = alpha[0].pt.m_prime, m2p = beta[0].pt.m_prime;
        const cplx expl =
            avg_product(*a1, *a2) * m1 * m1 * mm2 * mm2 / (1.0 - m1 * mm2) +
            hadamard_avg(*a1, *a2) * (-1.0) * std::pow(m1, 3) * std::pow(mm2, 3);
        check("k=l=1 covariance vs explicit formula", std::abs(v.total - expl) < 1e-10);
    }

    // kernel symmetry and positivity
    bool ker = true;
    for (int i = 0; i < 50; ++i) {
        double x = 3.8 * (i / 49.0) - 1.9, y = 1.3;
        if (std::abs(kernel_u(x, y) - kernel_u(y, x)) > 1e-12) ker = false;
        if (kernel_u(x, y) < 0.0) ker = false;
    }
    check("kernel symmetry and positivity", ker);

    // Bessel identity at t=1 against semicircle quadrature
    const cplx quad = integrate_semicircle(
        [](double x) { return std::exp(cplx(0.0, x)); }, 1e-12);
    check("J1(2t)/t identity at t=1", std::abs(quad.real() - bessel_j1_over_t(1.0)) < 1e-8 &&
                                          std::abs(quad.imag()) < 1e-12);

    // reproducibility of the sampler
    {
        EnsembleConfig cfg;
        cfg.n = 32;
        cfg.samples = 8;
        cfg.seed = 99;
        std::vector<MatPtr> pool;
        Chain c{link(cplx(0.0, 1.0), DetMat::identity(32))};
        std::vector<Mode> modes{chain_mode(c, pool, "g")};
        Sampler s1(cfg, pool), s2(cfg, pool);
        MatrixXc r1 = s1.run(modes, 2), r2 = s2.run(modes, 1);
        check("sampler reproducibility across thread counts", (r1 - r2).norm() == 0.0);
    }

    std::cout << (failures == 0 ? "selftest: all ok\n" : "selftest: FAILURES\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace
