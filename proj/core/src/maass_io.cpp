#include "mm/maass_io.hpp"

#include "mm/arith.hpp"
#include "mm/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mm::gl3 {

double MaassFormRecord::lam(long long n) const {
    if (n < 1 || n > n_max())
        throw corpus_error("MaassFormRecord: lambda(" + std::to_string(n) +
                           ") outside stored range");
    return lambda[static_cast<std::size_t>(n - 1)];
}

void validate_maass_record(const MaassFormRecord& rec, double tol) {
    if (rec.lambda.empty()) throw validation_error("maass record: no coefficients");
    if (std::abs(rec.lambda[0] - 1.0) > tol)
        throw validation_error("maass record: lambda(1) != 1");
    if (!(rec.omega > 0.0)) throw validation_error("maass record: omega must be positive");
    const long long N = rec.n_max();
    // Hecke multiplicativity: lambda(m) lambda(n) = sum_{d | (m,n)} lambda(mn/d^2)
    for (long long m = 2; m * m <= N; ++m) {
        for (long long n = m; m * n <= N; ++n) {
            double lhs = rec.lam(m) * rec.lam(n);
            double rhs = 0.0;
            for (long long d : arith::divisors(arith::gcd_ll(m, n)))
                rhs += rec.lam(m * n / (d * d));
            if (std::abs(lhs - rhs) > tol * (1.0 + std::abs(lhs)))
                throw validation_error("maass record: Hecke multiplicativity fails at (" +
                                       std::to_string(m) + "," + std::to_string(n) + ")");
        }
    }
}

std::vector<MaassFormRecord> ingest_maass_data(std::istream& in) {
    std::vector<MaassFormRecord> forms;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    MaassFormRecord cur;
    bool open = false;
    std::vector<std::pair<long long, double>> lambdas;

    auto flush = [&]() {
        if (!open) return;
        long long n_max = 0;
        for (auto& [n, v] : lambdas) n_max = std::max(n_max, n);
        cur.lambda.assign(static_cast<std::size_t>(n_max), 0.0);
        std::vector<bool> seen(static_cast<std::size_t>(n_max), false);
        for (auto& [n, v] : lambdas) {
            cur.lambda[static_cast<std::size_t>(n - 1)] = v;
            seen[static_cast<std::size_t>(n - 1)] = true;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                throw validation_error("maass record at t_j=" + std::to_string(cur.t_j) +
                                       ": missing lambda(" + std::to_string(i + 1) + ")");
        validate_maass_record(cur);
        forms.push_back(cur);
        lambdas.clear();
        open = false;
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;
        if (!header_seen) {
            std::string ver;
            if (tok != "maass" || !(ss >> ver) || ver != "v1")
                throw parse_error("expected header 'maass v1'", line_no);
            header_seen = true;
            continue;
        }
        if (tok == "form") {
            flush();
            cur = MaassFormRecord{};
            open = true;
            std::string kv;
            bool have_t = false, have_par = false, have_om = false;
            while (ss >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw parse_error("bad key=value '" + kv + "'", line_no);
                std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                try {
                    if (key == "t_j") cur.t_j = std::stod(val), have_t = true;
                    else if (key == "omega") cur.omega = std::stod(val), have_om = true;
                    else if (key == "parity") {
                        if (val == "even") cur.parity = MaassFormRecord::Parity::even;
                        else if (val == "odd") cur.parity = MaassFormRecord::Parity::odd;
                        else throw parse_error("parity must be even|odd", line_no);
                        have_par = true;
                    } else throw parse_error("unknown key '" + key + "'", line_no);
                } catch (const std::invalid_argument&) {
                    throw parse_error("bad number in '" + kv + "'", line_no);
                }
            }
            if (!have_t || !have_par || !have_om)
                throw parse_error("form line needs t_j=, parity=, omega=", line_no);
        } else if (tok == "lambda") {
            if (!open) throw parse_error("lambda line before any form line", line_no);
            long long n;
            double v;
            if (!(ss >> n >> v)) throw parse_error("lambda line needs index and value", line_no);
            if (n < 1) throw parse_error("lambda index must be >= 1", line_no);
            lambdas.emplace_back(n, v);
        } else {
            throw parse_error("unknown directive '" + tok + "'", line_no);
        }
    }
    flush();
    return forms;
}

std::vector<MaassFormRecord> load_maass_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open maass data file: " + path);
    return ingest_maass_data(in);
}

void write_maass_data(std::ostream& out, const std::vector<MaassFormRecord>& forms) {
    out << "maass v1\n";
    char buf[160];
    for (const auto& f : forms) {
        std::snprintf(buf, sizeof buf, "form t_j=%.15g parity=%s omega=%.15g\n", f.t_j,
                      f.parity == MaassFormRecord::Parity::even ? "even" : "odd", f.omega);
        out << buf;
        for (long long n = 1; n <= f.n_max(); ++n) {
            std::snprintf(buf, sizeof buf, "lambda %lld %.15g\n", n, f.lam(n));
            out << buf;
        }
    }
}

} // namespace mm::gl3
