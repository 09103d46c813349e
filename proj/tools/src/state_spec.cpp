#include "tomokit_cli/state_spec.hpp"

#include <charconv>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "tomokit/error.hpp"

namespace tomokit::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        fail_input(fmt::format("cannot parse '{}' as a number for {}", s, what));
    return v;
}

long long to_int(const std::string& s, const std::string& what) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        fail_input(fmt::format("cannot parse '{}' as an integer for {}", s, what));
    return v;
}

// "kind:k=v,k=v" -> kind and the key/value map; every listed key must be present
struct Parsed {
    std::string kind;
    std::map<std::string, std::string> args;
    std::string body;
};

Parsed parse(const std::string& spec) {
    Parsed p;
    const auto colon = spec.find(':');
    p.kind = spec.substr(0, colon);
    if (colon == std::string::npos) return p;
    p.body = spec.substr(colon + 1);
    for (const auto& item : split(p.body, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        p.args[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return p;
}

const std::string& need(const Parsed& p, const std::string& key) {
    const auto it = p.args.find(key);
    if (it == p.args.end()) fail_input(fmt::format("state spec '{}' is missing '{}='", p.kind, key));
    return it->second;
}

double get(const Parsed& p, const std::string& key, double fallback) {
    const auto it = p.args.find(key);
    return it == p.args.end() ? fallback : to_double(it->second, key);
}

}  // namespace

Grid1D parse_grid(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) fail_input(fmt::format("grid '{}' must be xmin,xmax,n", text));
    const double lo = to_double(parts[0], "grid"), hi = to_double(parts[1], "grid");
    const long long n = to_int(parts[2], "grid");
    if (!(hi > lo) || n < 2 || n > 1 << 20) fail_input(fmt::format("invalid grid '{}'", text));
    return make_grid(lo, hi, static_cast<int>(n));
}

CvState parse_cv_state(const std::string& spec, const std::optional<Grid1D>& grid) {
    const Parsed p = parse(spec);
    const Grid1D g = grid.value_or(Grid1D());
    if (p.kind == "fock") {
        const long long n = to_int(need(p, "n"), "n");
        if (n < 0 || n > 64) fail_input(fmt::format("Fock number {} outside 0..64", n));
        return {spec, fock_state(static_cast<int>(n), g)};
    }
    if (p.kind == "coherent") return {spec, coherent_state(cplx(get(p, "re", 0.0), get(p, "im", 0.0)), g)};
    if (p.kind == "thermal") {
        const double nbar = to_double(need(p, "nbar"), "nbar");
        if (!(nbar >= 0.0)) fail_input("nbar must be nonnegative");
        return {spec, thermal_state(nbar)};
    }
    if (p.kind == "cgauss") {
        Eigen::Matrix2d cov;
        const double c = get(p, "c", 0.0);
        cov << to_double(need(p, "sq"), "sq"), c, c, to_double(need(p, "sp"), "sp");
        if (!(cov(0, 0) > 0.0) || !(cov(1, 1) > 0.0) || cov.determinant() <= 0.0)
            fail_input("classical Gaussian covariance must be positive definite");
        return {spec, classical_gaussian_density(get(p, "mq", 0.0), get(p, "mp", 0.0), cov)};
    }
    fail_input(fmt::format("unknown state spec '{}'", spec));
}

SymplecticTomogram to_symplectic(const CvState& s) {
    return std::visit([](const auto& v) { return symplectic_tomogram(v); }, s.state);
}

OpticalTomogram to_optical(const CvState& s, const Grid1D& thetagrid, const std::optional<Grid1D>& xgrid) {
    if (const auto* rho = std::get_if<DensityMatrixCV>(&s.state)) return optical_tomogram(*rho, thetagrid, xgrid.value_or(Grid1D()));
    if (const auto* f = std::get_if<PhaseSpaceDensity>(&s.state)) return optical_tomogram(*f, thetagrid, xgrid);
    const auto& psi = std::get<WaveFunction>(s.state);
    if (xgrid) return optical_tomogram(symplectic_tomogram(psi), thetagrid, xgrid);
    return optical_tomogram(psi, thetagrid);
}

std::optional<DensityMatrixCV> to_density(const CvState& s) {
    if (const auto* rho = std::get_if<DensityMatrixCV>(&s.state)) return *rho;
    if (const auto* psi = std::get_if<WaveFunction>(&s.state)) return to_density_matrix(*psi);
    return std::nullopt;
}

bool is_spin_spec(const std::string& spec) {
    const std::string kind = parse(spec).kind;
    return kind == "qubit" || kind == "pure" || kind == "bell" || kind == "ghz" || kind == "haar" || kind == "mixhaar";
}

DensityMatrixSpin parse_spin_state(const std::string& spec) {
    const Parsed p = parse(spec);
    if (p.kind == "bell") return bell_state();
    if (p.kind == "ghz") return ghz_state();
    if (p.kind == "qubit") {
        const auto v = split(p.body, ',');
        if (v.size() != 2) fail_input("qubit spec needs two diagonal entries");
        CMatrix d = CMatrix::Zero(2, 2);
        d(0, 0) = to_double(v[0], "qubit");
        d(1, 1) = to_double(v[1], "qubit");
        return spin_state(d);
    }
    if (p.kind == "pure") {
        const auto v = split(p.body, ',');
        CVector psi(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) psi[static_cast<Eigen::Index>(i)] = to_double(v[i], "pure");
        return pure_spin_state(psi);
    }
    if (p.kind == "haar" || p.kind == "mixhaar") {
        const long long n = to_int(need(p, "N"), "N");
        if (n < 1 || n > 64) fail_input(fmt::format("dimension {} outside 1..64", n));
        Rng rng = substream(static_cast<std::uint64_t>(to_int(need(p, "seed"), "seed")), 0);
        return p.kind == "haar" ? haar_pure_state(static_cast<int>(n), rng) : haar_mixed_state(static_cast<int>(n), rng);
    }
    fail_input(fmt::format("unknown spin state spec '{}'", spec));
}

}  // namespace tomokit::cli
