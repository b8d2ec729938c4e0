// mm: command-line surface over the moment-machinery library.
// Exit codes: 0 ok, 2 contract failure, 3 input error.

#include "mm/arith.hpp"
#include "mm/cache.hpp"
#include "mm/config.hpp"
#include "mm/errors.hpp"
#include "mm/gl3.hpp"
#include "mm/kuznetsov.hpp"
#include "mm/maass_io.hpp"
#include "mm/moments.hpp"
#include "mm/transforms.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#ifdef MM_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

using namespace mm;

namespace {

constexpr int kExitOk = 0, kExitContract = 2, kExitInput = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

gl3::GL3Coefficients make_corpus(const std::string& spec, long long coeff_limit) {
    if (spec == "d3") return gl3::GL3Coefficients::eisenstein(special::LanglandsParams{});
    if (spec == "sym2delta") return gl3::GL3Coefficients::sym2_delta(coeff_limit);
    if (spec.rfind("unitary:", 0) == 0) {
        double t1, t2;
        if (std::sscanf(spec.c_str() + 8, "%lf,%lf", &t1, &t2) != 2)
            throw std::invalid_argument("corpus: expected unitary:<t1>,<t2>");
        return gl3::GL3Coefficients::eisenstein(special::LanglandsParams::unitary(t1, t2));
    }
    throw std::invalid_argument("corpus: expected d3 | sym2delta | unitary:<t1>,<t2>");
}

std::string params_tag(const special::LanglandsParams& p) {
    std::ostringstream os;
    os << p.alpha.real() << "," << p.alpha.imag() << ";" << p.beta.real() << ","
       << p.beta.imag() << ";" << p.gamma.real() << "," << p.gamma.imag();
    return os.str();
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

int cmd_kloosterman_table(long long c_max, long long a_max, long long b_max,
                          const std::string& out_path, const std::string& cache_dir) {
    if (c_max > arith::kloosterman_c_cap)
        throw range_error("kloosterman-table: c_max above supported cap 1e7");
    std::ofstream file;
    auto& out = open_out(file, out_path);
    cache::DiskCache dc(cache_dir);
    long long rows = c_max * a_max * b_max;
    long long spot_stride = std::max<long long>(1, rows / 64);
    out << "a,b,c,value\n";
    long long row = 0;
    for (long long c = 1; c <= c_max; ++c) {
        arith::KloostermanModulus S(c);
        for (long long a = 1; a <= a_max; ++a) {
            for (long long b = 1; b <= b_max; ++b, ++row) {
                double v = S.sum(a, b);
                out << a << "," << b << "," << c << "," << fmt(v) << "\n";
                if (row % spot_stride == 0) {
                    nlohmann::json j;
                    j["value"] = v;
                    dc.put("kloosterman:" + std::to_string(a) + ":" + std::to_string(b) +
                               ":" + std::to_string(c),
                           j.dump());
                }
            }
        }
    }
    return kExitOk;
}

int cmd_voronoi_check(const std::string& corpus, long long coeff_limit, long long m,
                      long long c, long long d, double X, long long truncation,
                      double tolerance, const std::string& psi_kind,
                      const std::string& out_path) {
    auto f = make_corpus(corpus, coeff_limit);
    transforms::TestFn psi = transforms::bump_on(X);
    if (psi_kind == "zero") psi.f = [](double) { return 0.0; };
    else if (psi_kind != "bump")
        throw std::invalid_argument("voronoi-check: psi must be bump|zero");
    auto r = transforms::voronoi_identity_check(f, m, c, d, psi, truncation, tolerance);
    double gap = std::abs(r.lhs - r.rhs);
    bool pass = gap <= std::max(tolerance * std::abs(r.lhs), r.tail_bound);
    nlohmann::json j;
    j["version"] = 1;
    j["corpus"] = corpus;
    j["m"] = m;
    j["c"] = c;
    j["d"] = d;
    j["X"] = X;
    j["truncation"] = r.truncation;
    j["lhs"] = {r.lhs.real(), r.lhs.imag()};
    j["rhs"] = {r.rhs.real(), r.rhs.imag()};
    j["polar"] = {r.polar.real(), r.polar.imag()};
    j["gap"] = gap;
    j["tail_bound"] = r.tail_bound;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    std::ofstream file;
    open_out(file, out_path) << j.dump(1) << "\n";
    return pass ? kExitOk : kExitContract;
}

int cmd_kuznetsov_check(const std::string& corpus_path, long long m, long long n, double T,
                        double M, const std::string& parity, long long c_max, double budget,
                        const std::string& out_path) {
    auto forms = gl3::load_maass_file(corpus_path);
    auto par = parity == "odd" ? kuznetsov::Parity::odd : kuznetsov::Parity::even;
    auto rep = kuznetsov::kuznetsov_check(m, n, T, M, par, forms, c_max);
    double scale = std::abs(rep.spectral_total + rep.eisenstein_total);
    bool empty_spectrum = scale == 0.0;
    bool pass = empty_spectrum || std::abs(rep.residual) <= budget * scale;
    nlohmann::json j = nlohmann::json::parse(rep.to_json(corpus_path));
    j["m"] = m;
    j["n"] = n;
    j["T"] = T;
    j["M"] = M;
    j["budget"] = budget;
    j["empty_spectral_side"] = empty_spectrum;
    j["pass"] = pass;
    std::ofstream file;
    open_out(file, out_path) << j.dump(1) << "\n";
    return pass ? kExitOk : kExitContract;
}

int cmd_fetch_maass(double min_t, double max_t, long long n_coeffs,
                    const std::string& out_path, bool offline,
                    const std::string& fixture) {
    if (min_t > max_t) throw std::invalid_argument("fetch-maass: min_t > max_t");
    if (offline) {
        std::ifstream in(fixture, std::ios::binary);
        if (!in) throw std::runtime_error("fetch-maass: fixture not found: " + fixture);
        std::ofstream out(out_path, std::ios::binary);
        out << in.rdbuf();
        return kExitOk;
    }
#ifndef MM_HAVE_OPENSSL
    throw std::runtime_error("fetch-maass: built without TLS support; use --offline");
#else
    // LMFDB API: retry with exponential backoff, then translate to maass v1
    const std::string host = "https://www.lmfdb.org";
    std::string query = "/api/maass_rigor/?degree=1&_format=json&spectral_parameter=ge" +
                        std::to_string(min_t) + "&spectral_parameter=le" +
                        std::to_string(max_t);
    std::string body;
    for (int attempt = 0; attempt < 3; ++attempt) {
        httplib::Client cli(host);
        cli.set_read_timeout(30, 0);
        auto res = cli.Get(query);
        if (res && res->status == 200) {
            body = res->body;
            break;
        }
        if (attempt == 2) throw std::runtime_error("fetch-maass: network error after 3 tries");
        std::this_thread::sleep_for(std::chrono::seconds(1 << attempt));
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (...) {
        throw std::runtime_error("fetch-maass: response is not JSON");
    }
    if (!j.contains("data"))
        throw std::runtime_error("fetch-maass: schema drift, no 'data' field");
    std::vector<gl3::MaassFormRecord> forms;
    for (const auto& row : j["data"]) {
        gl3::MaassFormRecord rec;
        if (!row.contains("spectral_parameter") || !row.contains("coefficients"))
            throw std::runtime_error("fetch-maass: schema drift in a data row");
        rec.t_j = row["spectral_parameter"].get<double>();
        rec.parity = row.value("symmetry", 1) == 1 ? gl3::MaassFormRecord::Parity::even
                                                   : gl3::MaassFormRecord::Parity::odd;
        rec.omega = row.value("omega", 0.0);
        for (const auto& c : row["coefficients"]) {
            rec.lambda.push_back(c.get<double>());
            if (static_cast<long long>(rec.lambda.size()) >= n_coeffs) break;
        }
        gl3::validate_maass_record(rec);
        forms.push_back(std::move(rec));
    }
    std::ofstream out(out_path);
    gl3::write_maass_data(out, forms);
    return kExitOk;
#endif
}

int cmd_moment_predict(const std::string& corpus, long long coeff_limit, long long p,
                       double t_lo, double t_hi, int steps, const std::string& m_rule,
                       bool derivative, const std::string& out_path) {
    auto f = make_corpus(corpus, coeff_limit);
    auto m_of = [&](double T) -> double {
        if (m_rule.rfind("ratio:", 0) == 0) return std::stod(m_rule.substr(6)) * T;
        if (m_rule.rfind("fixed:", 0) == 0) return std::stod(m_rule.substr(6));
        throw std::invalid_argument("m-rule: expected ratio:<r> or fixed:<v>");
    };
    std::ofstream file;
    auto& out = open_out(file, out_path);
    out << "T,M,p,main,secondary,budget\n";
    for (int i = 0; i < steps; ++i) {
        double T = (steps == 1) ? t_lo : t_lo + (t_hi - t_lo) * i / (steps - 1.0);
        double M = m_of(T);
        auto pr = moments::predict_moment(f, p, T, M, derivative);
        out << fmt(T) << "," << fmt(M) << "," << p << "," << fmt(pr.main) << ","
            << fmt(pr.secondary) << "," << fmt(pr.error_budget) << "\n";
    }
    return kExitOk;
}

int cmd_transforms_eval(const std::string& op, double y, double t, double x, int sign,
                        double sigma, double X, const std::string& corpus,
                        long long coeff_limit, const std::string& out_path,
                        const std::string& cache_dir) {
    auto f = make_corpus(corpus, coeff_limit);
    const auto& par = f.params();
    nlohmann::json j;
    j["op"] = op;
    cplx v;
    if (op == "V" || op == "U") {
        auto spec = transforms::ContourSpec::for_afe(y, t, sigma > 0 ? sigma : 0.7);
        v = (op == "V")
                ? transforms::afe_transform_V(y, t, special::GammaKind::minus, par, spec)
                : transforms::afe_transform_U(y, t, special::GammaKind::minus, par, spec);
        j["y"] = y;
        j["t"] = t;
    } else if (op == "psi-exact") {
        auto psi = transforms::bump_on(X);
        double sg = (sigma != 0.0) ? sigma
                                   : std::max(-0.55, transforms::psi_sigma_effective_floor(par) + 0.3);
        v = transforms::voronoi_psi_exact(x, par, psi, sign, sg);
        j["x"] = x;
        j["X"] = X;
        j["sign"] = sign;
    } else if (op == "psi-asym") {
        auto psi = transforms::bump_on(X);
        cache::DiskCache dc(cache_dir);
        std::string key = "psi_calibration:" + params_tag(par) + ":" + std::to_string(sign);
        transforms::PsiCalibration cal;
        if (auto hit = dc.get(key)) {
            cal = transforms::PsiCalibration::from_json(*hit);
        } else {
            cal = transforms::calibrate_psi_constants(par, sign, transforms::bump_on(10.0));
            dc.put(key, cal.to_json());
        }
        v = transforms::voronoi_psi_asymptotic(x, psi, cal, 1);
        j["x"] = x;
        j["X"] = X;
        j["sign"] = sign;
        j["calibration_residual"] = cal.residual;
    } else {
        throw std::invalid_argument("transforms-eval: op must be V|U|psi-exact|psi-asym");
    }
    j["value"] = {v.real(), v.imag()};
    std::ofstream file;
    open_out(file, out_path) << j.dump(1) << "\n";
    return kExitOk;
}

int cmd_cache_verify(const std::string& cache_dir, int sample, double tolerance) {
    cache::DiskCache dc(cache_dir);
    auto all = dc.entries();
    if (all.empty()) {
        std::printf("cache verify: no entries in %s\n", cache_dir.c_str());
        return kExitOk;
    }
    // deterministic sample: stable sort by key hash
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return cache::fnv1a(a.key) < cache::fnv1a(b.key);
    });
    int checked = 0, failed = 0;
    for (const auto& e : all) {
        if (checked >= sample) break;
        if (e.key.rfind("kloosterman:", 0) == 0) {
            long long a, b, c;
            if (std::sscanf(e.key.c_str(), "kloosterman:%lld:%lld:%lld", &a, &b, &c) != 3)
                continue;
            double stored = nlohmann::json::parse(e.value)["value"].get<double>();
            double fresh = arith::kloosterman(a, b, c);
            bool ok = std::abs(stored - fresh) <= tolerance * (1.0 + std::abs(fresh));
            std::printf("%s %s\n", ok ? "ok  " : "FAIL", e.key.c_str());
            failed += !ok;
            ++checked;
        } else if (e.key.rfind("psi_calibration:", 0) == 0) {
            auto cal = transforms::PsiCalibration::from_json(e.value);
            auto psi = transforms::bump_on(10.0);
            double x = 1e4 / 10.0;
            double sg = std::max(-0.55,
                                 transforms::psi_sigma_effective_floor(cal.params) + 0.3);
            cplx exact = transforms::voronoi_psi_exact(x, cal.params, psi, cal.sign, sg);
            cplx model = transforms::voronoi_psi_asymptotic(x, psi, cal, 1);
            double rel = std::abs(model / exact - 1.0);
            bool ok = rel < std::max(0.2, 6.0 * cal.residual);
            std::printf("%s %s (model/exact deviation %.3g)\n", ok ? "ok  " : "FAIL",
                        e.key.c_str(), rel);
            failed += !ok;
            ++checked;
        }
    }
    std::printf("cache verify: %d checked, %d failed\n", checked, failed);
    return failed ? kExitContract : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical machinery for GL(3)xGL(2) moment computations"};
    app.require_subcommand(1);

    std::string config_path, out_path, cache_dir;
    bool offline = false;
    double tolerance = 0.0;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_flag("--offline", offline, "never touch the network");
    app.add_option("--tolerance", tolerance, "override the default tolerance");

    // kloosterman-table
    auto* kt = app.add_subcommand("kloosterman-table", "exact Kloosterman sum table (CSV)");
    long long kt_cmax = 10, kt_amax = 3, kt_bmax = 3;
    std::string kt_out;
    kt->add_option("--c-max", kt_cmax)->required();
    kt->add_option("--a-max", kt_amax);
    kt->add_option("--b-max", kt_bmax);
    kt->add_option("--out", kt_out);

    // voronoi-check
    auto* vc = app.add_subcommand("voronoi-check", "GL(3) Voronoi identity check (JSON)");
    std::string vc_corpus = "d3", vc_out;
    long long vc_m = 1, vc_c = 1, vc_d = 1, vc_trunc = 24000, vc_limit = 30000;
    double vc_X = 50.0, vc_tol = 1e-5;
    vc->add_option("--corpus", vc_corpus);
    vc->add_option("--coeff-limit", vc_limit);
    vc->add_option("--m", vc_m);
    vc->add_option("--c", vc_c);
    vc->add_option("--d", vc_d);
    vc->add_option("--X", vc_X);
    vc->add_option("--truncation", vc_trunc);
    vc->add_option("--tol", vc_tol);
    std::string vc_psi = "bump";
    vc->add_option("--psi", vc_psi, "bump|zero");
    vc->add_option("--out", vc_out);

    // kuznetsov-check
    auto* kc = app.add_subcommand("kuznetsov-check", "Kuznetsov trace formula check (JSON)");
    std::string kc_path, kc_parity = "even", kc_out;
    long long kc_m = 1, kc_n = 1, kc_cmax = 500;
    double kc_T = 9.0, kc_M = 2.0, kc_budget = 1e-2;
    kc->add_option("--corpus-path", kc_path)->required();
    kc->add_option("--m", kc_m);
    kc->add_option("--n", kc_n);
    kc->add_option("--T", kc_T);
    kc->add_option("--M", kc_M);
    kc->add_option("--parity", kc_parity);
    kc->add_option("--c-max", kc_cmax);
    kc->add_option("--budget", kc_budget);
    kc->add_option("--out", kc_out);

    // fetch-maass
    auto* fm = app.add_subcommand("fetch-maass", "fetch Maass form data (maass v1)");
    double fm_min = 9.0, fm_max = 10.0;
    long long fm_n = 100;
    std::string fm_out = "maass_fetch.dat", fm_fixture = "data/maass_fixture.dat";
    fm->add_option("--min-t", fm_min);
    fm->add_option("--max-t", fm_max);
    fm->add_option("--n-coeffs", fm_n);
    fm->add_option("--out", fm_out);
    fm->add_option("--fixture", fm_fixture);

    // moment-predict
    auto* mp = app.add_subcommand("moment-predict", "main-term predictions (CSV)");
    std::string mp_corpus = "sym2delta", mp_rule = "ratio:0.2", mp_out;
    long long mp_p = 2, mp_limit = 22000;
    double mp_tlo = 100.0, mp_thi = 400.0;
    int mp_steps = 4;
    bool mp_deriv = false;
    mp->add_option("--corpus", mp_corpus);
    mp->add_option("--coeff-limit", mp_limit);
    mp->add_option("--p", mp_p);
    mp->add_option("--t-lo", mp_tlo);
    mp->add_option("--t-hi", mp_thi);
    mp->add_option("--t-steps", mp_steps);
    mp->add_option("--m-rule", mp_rule);
    mp->add_flag("--derivative", mp_deriv);
    mp->add_option("--out", mp_out);

    // transforms-eval
    auto* te = app.add_subcommand("transforms-eval", "evaluate V/U/Psi at a point (JSON)");
    std::string te_op = "V", te_corpus = "d3", te_out;
    double te_y = 1.0, te_t = 10.0, te_x = 10.0, te_sigma = 0.0, te_X = 10.0;
    int te_sign = 1;
    long long te_limit = 4000;
    te->add_option("--op", te_op);
    te->add_option("--y", te_y);
    te->add_option("--t", te_t);
    te->add_option("--x", te_x);
    te->add_option("--sign", te_sign);
    te->add_option("--sigma", te_sigma);
    te->add_option("--X", te_X);
    te->add_option("--corpus", te_corpus);
    te->add_option("--coeff-limit", te_limit);
    te->add_option("--out", te_out);

    // cache verify
    auto* cv = app.add_subcommand("cache", "cache maintenance");
    auto* cvv = cv->add_subcommand("verify", "recompute sampled cache entries");
    int cv_sample = 10;
    cvv->add_option("--sample", cv_sample);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        Config cfg = config_path.empty() ? Config::from_environment()
                                         : Config::load_file(config_path);
        if (offline) cfg.offline = true;
        if (tolerance > 0.0) cfg.tolerance = tolerance;
        cache_dir = cfg.cache_dir;

        if (kt->parsed())
            return cmd_kloosterman_table(kt_cmax, kt_amax, kt_bmax, kt_out, cache_dir);
        if (vc->parsed())
            return cmd_voronoi_check(vc_corpus, vc_limit, vc_m, vc_c, vc_d, vc_X, vc_trunc,
                                     tolerance > 0 ? tolerance : vc_tol, vc_psi, vc_out);
        if (kc->parsed())
            return cmd_kuznetsov_check(kc_path, kc_m, kc_n, kc_T, kc_M, kc_parity, kc_cmax,
                                       kc_budget, kc_out);
        if (fm->parsed())
            return cmd_fetch_maass(fm_min, fm_max, fm_n, fm_out, cfg.offline, fm_fixture);
        if (mp->parsed())
            return cmd_moment_predict(mp_corpus, mp_limit, mp_p, mp_tlo, mp_thi, mp_steps,
                                      mp_rule, mp_deriv, mp_out);
        if (te->parsed())
            return cmd_transforms_eval(te_op, te_y, te_t, te_x, te_sign, te_sigma, te_X,
                                       te_corpus, te_limit, te_out, cache_dir);
        if (cv->parsed() && cvv->parsed())
            return cmd_cache_verify(cache_dir, cv_sample, cfg.tolerance);
        std::fprintf(stderr, "no subcommand\n");
        return kExitInput;
    } catch (const truncation_error& e) {
        std::fprintf(stderr, "contract failure: %s\n", e.what());
        return kExitContract;
    } catch (const accuracy_error& e) {
        std::fprintf(stderr, "contract failure: %s\n", e.what());
        return kExitContract;
    } catch (const parse_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const validation_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
}
