#ifndef MM_MAASS_IO_HPP
#define MM_MAASS_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mm::gl3 {

// One GL(2) Hecke-Maass form: spectral parameter, parity, harmonic weight
// omega_j = 4 pi |rho_j(1)|^2 / cosh(pi t_j), and eigenvalues lambda(n).
struct MaassFormRecord {
    enum class Parity { even, odd };

    double t_j = 0.0;
    Parity parity = Parity::even;
    double omega = 0.0;
    std::vector<double> lambda; // lambda[n-1] = lambda(n), lambda(1) = 1

    double lam(long long n) const;
    long long n_max() const { return static_cast<long long>(lambda.size()); }
};

// Line format ("maass v1"):
//   maass v1
//   form t_j=<float> parity=<even|odd> omega=<float>
//   lambda <n> <float>
// '#' comments and blank lines are ignored.  Each record passes the
// data-quality gate: lambda(1) = 1 and Hecke multiplicativity to 1e-6.
std::vector<MaassFormRecord> ingest_maass_data(std::istream& in);
std::vector<MaassFormRecord> load_maass_file(const std::string& path);
void write_maass_data(std::ostream& out, const std::vector<MaassFormRecord>& forms);

// the gate used by ingestion, exposed for data tooling
void validate_maass_record(const MaassFormRecord& rec, double tol = 1e-6);

} // namespace mm::gl3

#endif
