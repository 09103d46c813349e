// tomokit command-line front end. Exit codes: 0 ok, 1 usage, 2 validation, 3 numerical.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <json.hpp>

#include "tomokit/cvrecon.hpp"
#include "tomokit/cventropy.hpp"
#include "tomokit/cvtomo.hpp"
#include "tomokit/error.hpp"
#include "tomokit/fidelity.hpp"
#include "tomokit/multimode.hpp"
#include "tomokit/report.hpp"
#include "tomokit/spintomo.hpp"
#include "tomokit_cli/acceptance.hpp"
#include "tomokit_cli/state_spec.hpp"

using namespace tomokit;
using namespace tomokit::cli;

namespace {

using Value = std::variant<std::string, double, long long, bool>;
struct Field {
    std::string key;
    Value value;
};
using Line = std::vector<Field>;

// Collects report lines; renders key=value text or a JSON mirror.
class Emitter {
public:
    void add(Line l) { lines_.push_back(std::move(l)); }

    std::string render(bool json) const {
        if (!json) {
            std::string s;
            for (const auto& l : lines_) {
                for (std::size_t i = 0; i < l.size(); ++i) s += (i ? " " : "") + l[i].key + "=" + text(l[i].value);
                s += "\n";
            }
            return s;
        }
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& l : lines_) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (const auto& f : l) obj[f.key] = to_json(f.value);
            arr.push_back(obj);
        }
        return (arr.size() == 1 ? arr[0] : arr).dump() + "\n";
    }

private:
    static std::string text(const Value& v) {
        if (const auto* s = std::get_if<std::string>(&v)) return *s;
        if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
        if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
        return format_bool(std::get<bool>(v));
    }
    static nlohmann::ordered_json to_json(const Value& v) {
        if (const auto* d = std::get_if<double>(&v)) {
            if (!std::isfinite(*d)) return format_number(*d);
            return nlohmann::ordered_json::parse(format_number(*d));
        }
        if (const auto* s = std::get_if<std::string>(&v)) return *s;
        if (const auto* i = std::get_if<long long>(&v)) return *i;
        return std::get<bool>(v);
    }
    std::vector<Line> lines_;
};

struct Options {
    std::string state;
    std::vector<std::string> states;
    std::string grid;
    int thetas = 256;
    std::uint64_t seed = 0;
    int samples = 0;
    std::optional<double> tol;
    std::string out;
    bool json = false;
    // command specific
    double mu = 1.0, nu = 0.0, q = 0.5, theta = 0.0, alpha = 2.0, lambda_max = 40.0;
    std::vector<double> mus, nus;
    std::vector<int> dims;
    int cutoff = default_cutoff;
    std::string tomo_file, a, b;
    bool has_q = false;
};

std::optional<Grid1D> grid_of(const Options& o) {
    if (o.grid.empty()) return std::nullopt;
    return parse_grid(o.grid);
}

double tol_or(const Options& o, double fallback) {
    const double t = o.tol.value_or(fallback);
    if (!(t > 0.0)) fail_input("tolerance must be positive");
    return t;
}

int samples_or(const Options& o, int fallback) { return o.samples > 0 ? o.samples : fallback; }

Grid1D angle_grid(int n) {
    if (n < 4) fail_input("need at least 4 angles");
    return make_grid(0.0, 2.0 * pi, n);
}

// A tomogram argument may name a saved optical tomogram or a state spec.
SymplecticTomogram tomogram_arg(const std::string& arg, const Options& o) {
    if (std::filesystem::exists(arg)) return symplectic_tomogram(load_optical(arg));
    return to_symplectic(parse_cv_state(arg, grid_of(o)));
}

OpticalTomogram optical_arg(const std::string& arg, const Options& o) {
    if (std::filesystem::exists(arg)) return load_optical(arg);
    return to_optical(parse_cv_state(arg, grid_of(o)), angle_grid(o.thetas), grid_of(o));
}

void require_state(const Options& o) {
    if (o.state.empty()) fail_input("--state is required");
}

void write_text(const Options& o, const std::string& s) {
    if (o.out.empty()) {
        std::cout << s;
        return;
    }
    std::ofstream f(o.out);
    if (!f) fail_input(fmt::format("cannot open '{}' for writing", o.out));
    f << s;
}

// ---- commands; each returns the exit code

int cmd_state(const Options& o, Emitter& e) {
    require_state(o);
    if (is_spin_spec(o.state)) {
        const auto rho = parse_spin_state(o.state);
        e.add({{"spec", o.state},
               {"dim", static_cast<long long>(rho.dim())},
               {"purity", (rho.entries * rho.entries).trace().real()},
               {"von_neumann", von_neumann_entropy(rho)}});
        return 0;
    }
    const auto s = parse_cv_state(o.state, grid_of(o));
    const auto m = to_symplectic(s);
    const double mq = tomogram_moments(m, 1, Quadrature1D::position), mp = tomogram_moments(m, 1, Quadrature1D::momentum);
    Line l{{"spec", o.state},
           {"backend", to_string(m.backend())},
           {"mean_q", mq},
           {"mean_p", mp},
           {"var_q", tomogram_moments(m, 2, Quadrature1D::position) - mq * mq},
           {"var_p", tomogram_moments(m, 2, Quadrature1D::momentum) - mp * mp}};
    if (const auto rho = to_density(s)) l.push_back({"purity", (rho->rho * rho->rho).trace().real()});
    e.add(l);
    return 0;
}

int cmd_tomo_optical(const Options& o, Emitter& e) {
    require_state(o);
    const auto w = to_optical(parse_cv_state(o.state, grid_of(o)), angle_grid(o.thetas), grid_of(o));
    if (o.out.empty()) {
        write_optical(std::cout, w);
        return 0;
    }
    save_optical(o.out, w);
    double lo = 1e300, hi = -1e300;
    for (int t = 0; t < w.values.rows(); ++t) {
        const double s = differential_entropy(w.values.row(t).transpose(), w.xgrid.spacing());
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    e.add({{"out", o.out},
           {"ntheta", static_cast<long long>(w.thetagrid.count())},
           {"nx", static_cast<long long>(w.xgrid.count())},
           {"min_row_entropy", lo},
           {"max_row_entropy", hi}});
    return 0;
}

int cmd_tomo_symplectic(const Options& o, Emitter&) {
    require_state(o);
    const auto m = to_symplectic(parse_cv_state(o.state, std::nullopt));
    const double s = std::hypot(o.mu, o.nu);
    if (s < 1e-12) fail_input("direction (mu, nu) must be nonzero");
    const Grid1D g = o.grid.empty() ? make_grid(s * m.grid().lower(), s * m.grid().upper(), m.grid().count()) : parse_grid(o.grid);
    std::string csv = "X,M\n";
    for (int i = 0; i < g.count(); ++i) csv += format_number(g[i]) + "," + format_number(m(g[i], o.mu, o.nu)) + "\n";
    write_text(o, csv);
    return 0;
}

int cmd_tomo_cm(const Options& o, Emitter&) {
    if (o.states.empty()) fail_input("--state is required (one per mode)");
    const int n = static_cast<int>(o.states.size());
    if (static_cast<int>(o.mus.size()) != n || static_cast<int>(o.nus.size()) != n)
        fail_input(fmt::format("dimension mismatch: {} modes need {} --mu and --nu values", n, n));
    std::vector<DensityMatrixCV> modes;
    for (const auto& spec : o.states) {
        const auto rho = to_density(parse_cv_state(spec));
        if (!rho) fail_input("center-of-mass tomograms from the command line take quantum product states");
        modes.push_back(*rho);
    }
    const auto cm = center_of_mass_tomogram(product_state(modes));
    const RVector mu = Eigen::Map<const RVector>(o.mus.data(), n), nu = Eigen::Map<const RVector>(o.nus.data(), n);
    const Grid1D g = o.grid.empty() ? cm.span(mu, nu) : parse_grid(o.grid);
    const RVector row = cm.row(mu, nu, g);
    std::string csv = "X,M\n";
    for (int i = 0; i < g.count(); ++i) csv += format_number(g[i]) + "," + format_number(row[i]) + "\n";
    write_text(o, csv);
    return 0;
}

std::string source_of(const Options& o) {
    if (!o.tomo_file.empty()) return o.tomo_file;
    require_state(o);
    return o.state;
}

int cmd_recon(const Options& o, Emitter& e) {
    const std::string src = source_of(o);
    const auto m = tomogram_arg(src, o);
    const auto rho = reconstruct_density_matrix(m, o.cutoff);
    const double lo = Eigen::SelfAdjointEigenSolver<CMatrix>(rho.rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    Line l{{"cutoff", static_cast<long long>(o.cutoff)}, {"trace", rho.rho.trace().real()}, {"min_eig", lo}};
    if (o.tomo_file.empty())
        if (const auto truth = to_density(parse_cv_state(o.state))) l.push_back({"fidelity", state_fidelity(rho, *truth)});
    if (!o.out.empty()) {
        const auto f = reconstruct_phase_space(m);
        std::string csv = "q,p,f\n";
        for (int i = 0; i < f.qgrid.count(); ++i)
            for (int j = 0; j < f.pgrid.count(); ++j)
                csv += format_number(f.qgrid[i]) + "," + format_number(f.pgrid[j]) + "," + format_number(f.values(i, j)) + "\n";
        write_text(o, csv);
        l.push_back({"out", o.out});
    }
    e.add(l);
    return 0;
}

int cmd_classify(const Options& o, Emitter& e) {
    const auto m = tomogram_arg(source_of(o), o);
    const auto r = classify_tomogram(m, o.tol, o.cutoff);
    e.add({{"classical", r.classical},
           {"quantum", r.quantum},
           {"min_f", r.min_phase_space_value},
           {"min_eig", r.min_density_eigenvalue}});
    return 0;
}

int cmd_fidelity(const Options& o, Emitter& e) {
    if (o.a.empty() || o.b.empty()) fail_input("--a and --b are required");
    const auto r = fidelity_from_tomograms(optical_arg(o.a, o), optical_arg(o.b, o), o.lambda_max);
    e.add({{"F", r.fidelity}, {"im_residual", r.im_residual}, {"bounds_ok", r.bounds_ok}});
    return 0;
}

int cmd_entropy_cv(const Options& o, Emitter& e) {
    require_state(o);
    const auto m = to_symplectic(parse_cv_state(o.state, grid_of(o)));
    const double sq = tomographic_entropy(m, 0.0), sp = tomographic_entropy(m, pi / 2);
    const double bound = std::log(pi * std::exp(1.0));
    e.add({{"S_q", sq}, {"S_p", sp}, {"sum", sq + sp}, {"bound", bound}, {"residual", sq + sp - bound}});
    return 0;
}

int cmd_entropy_renyi(const Options& o, Emitter& e) {
    require_state(o);
    const auto m = to_symplectic(parse_cv_state(o.state, grid_of(o)));
    const double h = m.grid().spacing();
    e.add({{"q", o.q},
           {"R_q", renyi_differential_entropy(m.optical_row(0.0), h, o.q)},
           {"R_p", renyi_differential_entropy(m.optical_row(pi / 2), h, o.q)}});
    return 0;
}

int cmd_entropy_tomo(const Options& o, Emitter& e) {
    require_state(o);
    const auto rho = parse_spin_state(o.state);
    const auto mode = o.has_q ? EntropyMode::renyi(o.q) : EntropyMode::shannon();
    const auto r = min_over_unitaries(rho, mode, samples_or(o, 1000), o.seed);
    const RVector w = spin_tomogram(rho, UnitaryMatrix::Identity(rho.dim(), rho.dim())).probabilities;
    e.add({{"mode", std::string(o.has_q ? "renyi" : "shannon")},
           {"at_identity", o.has_q ? renyi_entropy(w, o.q) : shannon_entropy(w)},
           {"minimum", r.min_value},
           {"attained", r.attained},
           {"sampled_min", r.sampled_min},
           {"samples", static_cast<long long>(r.samples)}});
    return 0;
}

int verdict(Emitter& e, double worst, double tol) {
    const bool ok = worst >= -tol;
    e.add({{"min_residual", worst}, {"ok", ok}});
    return ok ? 0 : 2;
}

int cmd_ineq_ur(const Options& o, Emitter& e) {
    require_state(o);
    const auto m = to_symplectic(parse_cv_state(o.state, grid_of(o)));
    const int n = o.thetas == 256 ? 16 : o.thetas;
    std::vector<double> thetas(n);
    for (int k = 0; k < n; ++k) thetas[k] = pi * k / n;
    double worst = 1e300;
    for (const auto& r : entropic_ur_check(m, thetas)) {
        e.add({{"theta", r.theta}, {"S", r.entropy}, {"S_conj", r.entropy_conjugate}, {"residual", r.residual}});
        worst = std::min(worst, r.residual);
    }
    return verdict(e, worst, tol_or(o, 1e-4));
}

int cmd_ineq_renyi(const Options& o, Emitter& e) {
    require_state(o);
    const auto m = to_symplectic(parse_cv_state(o.state, grid_of(o)));
    double worst = 1e300;
    for (const auto& r : renyi_ur_check(m, o.theta)) {
        e.add({{"q", r.q}, {"residual", r.residual}});
        worst = std::min(worst, r.residual);
    }
    return verdict(e, worst, tol_or(o, 1e-3));
}

int cmd_ineq_qft(const Options& o, Emitter& e) {
    require_state(o);
    const auto rho = parse_spin_state(o.state);
    const int n = rho.dim();
    const double beta = o.alpha / (2.0 * o.alpha - 1.0);
    const auto line = [](const QftInequalityReport& r) {
        return Line{{"renyi_sqrt", r.renyi_sqrt},
                    {"renyi_rotated", r.renyi_rotated},
                    {"shannon_rotated", r.shannon_rotated},
                    {"shannon_sqrt", r.shannon_sqrt},
                    {"von_neumann", r.von_neumann}};
    };
    const auto id = qft_inequality_check(rho, UnitaryMatrix::Identity(n, n), o.alpha, beta);
    e.add(line(id));
    double worst = id.min_residual();
    const int samples = samples_or(o, 1000);
    for (int i = 0; i < samples; ++i) {
        Rng rng = substream(o.seed, i);
        worst = std::min(worst, qft_inequality_check(rho, haar_unitary(n, rng), o.alpha, beta).min_residual());
    }
    e.add({{"samples", static_cast<long long>(samples)}, {"alpha", o.alpha}, {"beta", beta}});
    return verdict(e, worst, tol_or(o, 1e-10));
}

std::vector<int> dims_or(const Options& o, int dim, int parts) {
    if (!o.dims.empty()) return o.dims;
    if (parts == 2 && dim % 2 == 0) return {2, dim / 2};
    if (parts == 3 && dim == 8) return {2, 2, 2};
    fail_input("--dims is required for this state");
}

int cmd_ineq_subadd(const Options& o, Emitter& e) {
    require_state(o);
    const auto rho = parse_spin_state(o.state);
    const auto d = dims_or(o, rho.dim(), 2);
    if (d.size() != 2) fail_input("subadditivity needs two subsystem dimensions");
    const int n = rho.dim();
    const auto r = bipartite_subadditivity(rho, d[0], d[1], UnitaryMatrix::Identity(n, n));
    e.add({{"H1", r.h1}, {"H2", r.h2}, {"H12", r.h12}, {"residual", r.residual}, {"von_neumann", r.von_neumann}});
    double worst = std::min(r.residual, r.von_neumann);
    const int samples = samples_or(o, 200);
    for (int i = 0; i < samples; ++i) {
        Rng rng = substream(o.seed, i);
        worst = std::min(worst, bipartite_subadditivity(rho, d[0], d[1], haar_unitary(n, rng)).residual);
    }
    e.add({{"samples", static_cast<long long>(samples)}});
    return verdict(e, worst, tol_or(o, 1e-10));
}

int cmd_ineq_ssa(const Options& o, Emitter& e) {
    require_state(o);
    const auto rho = parse_spin_state(o.state);
    const auto d = dims_or(o, rho.dim(), 3);
    const int n = rho.dim();
    const auto r = tripartite_ssa(rho, d, UnitaryMatrix::Identity(n, n));
    e.add({{"H12", r.h12}, {"H23", r.h23}, {"H123", r.h123}, {"H2", r.h2}, {"residual", r.residual}, {"von_neumann", r.von_neumann}});
    double worst = std::min(r.residual, r.von_neumann);
    const int samples = samples_or(o, 200);
    for (int i = 0; i < samples; ++i) {
        Rng rng = substream(o.seed, i);
        worst = std::min(worst, tripartite_ssa(rho, d, haar_unitary(n, rng)).residual);
    }
    e.add({{"samples", static_cast<long long>(samples)}});
    return verdict(e, worst, tol_or(o, 1e-10));
}

int cmd_ineq_bounds(const Options& o, Emitter& e) {
    require_state(o);
    const auto rho = parse_spin_state(o.state);
    const int n = rho.dim();
    if (n < 2) fail_input("measurement bounds need dimension at least 2");
    const RVector lam = spin_eigenvalues(rho);
    if (std::abs(lam[0] - 1.0) > 1e-10) fail_input("measurement bounds take a pure state");
    const ObservablePair pair{UnitaryMatrix::Identity(n, n), qft_matrix(n), RVector::Zero(n), RVector::Zero(n)};
    const auto line = [](const MeasurementBounds& b) {
        Line l{{"H_p", b.h_p}, {"H_q", b.h_q}, {"c", b.overlap}, {"deutsch", b.deutsch}, {"maassen_uffink", b.maassen_uffink}};
        if (b.unbiased) l.push_back({"mub", b.mub});
        return l;
    };
    const auto r = measurement_bounds(pair, eigenbasis(rho).col(0));
    e.add(line(r));
    double worst = std::min({r.deutsch, r.maassen_uffink, r.unbiased ? r.mub : 0.0});
    const int samples = o.samples;
    for (int i = 0; i < samples; ++i) {
        Rng rng = substream(o.seed, i);
        const auto b = measurement_bounds(pair, haar_unitary(n, rng).col(0));
        worst = std::min({worst, b.deutsch, b.maassen_uffink, b.unbiased ? b.mub : 0.0});
    }
    if (samples > 0) e.add({{"samples", static_cast<long long>(samples)}});
    return verdict(e, worst, tol_or(o, 1e-12));
}

int cmd_haar_avg(const Options& o, Emitter& e) {
    require_state(o);
    const auto rho = parse_spin_state(o.state);
    const auto mode = o.alpha == 0.0 ? AverageMode::shannon() : AverageMode::renyi_pair(o.alpha, o.alpha / (2.0 * o.alpha - 1.0));
    const auto g = group_average_entropy(rho, mode, samples_or(o, 10000), o.seed);
    e.add({{"samples", static_cast<long long>(g.samples)},
           {"mean", g.mean},
           {"stderr", g.std_error},
           {"bound_residual", g.bound_residual},
           {"column_mean", g.column_mean},
           {"column_stderr", g.column_std_error},
           {"column_residual", g.column_residual}});
    const bool ok = g.bound_residual >= -3.0 * g.std_error && g.column_residual >= -3.0 * g.column_std_error;
    e.add({{"ok", ok}});
    return ok ? 0 : 2;
}

int cmd_selftest(const Options& o, Emitter& e) {
    bool ok = true;
    for (const auto& c : run_acceptance(o.seed)) {
        e.add({{"criterion", static_cast<long long>(c.id)},
               {"name", c.name},
               {"passed", c.passed},
               {"detail", o.json ? c.detail : "\"" + c.detail + "\""}});
        ok = ok && c.passed;
    }
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tomokit: tomographic probability toolkit"};
    app.require_subcommand(1);
    Options o;
    int code = 0;
    Emitter emitter;

    const auto common = [&](CLI::App* c) {
        c->add_option("--grid", o.grid, "position grid xmin,xmax,n");
        c->add_option("--thetas", o.thetas, "number of angles");
        c->add_option("--seed", o.seed, "random seed");
        c->add_option("--samples", o.samples, "Monte-Carlo sample count");
        c->add_option("--tol", o.tol, "tolerance override");
        c->add_option("--out", o.out, "output path");
        c->add_flag("--json", o.json, "JSON output");
    };
    const auto with_state = [&](CLI::App* c) {
        c->add_option("--state", o.state, "state spec");
        common(c);
    };

    std::vector<std::pair<CLI::App*, std::function<int(const Options&, Emitter&)>>> commands;
    const auto reg = [&](CLI::App* c, std::function<int(const Options&, Emitter&)> f) { commands.push_back({c, std::move(f)}); };

    auto* state = app.add_subcommand("state", "describe a state");
    with_state(state);
    reg(state, cmd_state);

    auto* tomo = app.add_subcommand("tomo", "compute tomograms");
    tomo->require_subcommand(1);
    auto* optical = tomo->add_subcommand("optical", "optical tomogram (OpticalTomogram v1 file)");
    with_state(optical);
    reg(optical, cmd_tomo_optical);
    auto* sympl = tomo->add_subcommand("symplectic", "symplectic tomogram row as CSV");
    with_state(sympl);
    sympl->add_option("--mu", o.mu);
    sympl->add_option("--nu", o.nu);
    reg(sympl, cmd_tomo_symplectic);
    auto* cm = tomo->add_subcommand("cm", "center-of-mass tomogram of a product state as CSV");
    cm->add_option("--state", o.states, "one spec per mode")->take_all();
    cm->add_option("--mu", o.mus)->delimiter(',');
    cm->add_option("--nu", o.nus)->delimiter(',');
    common(cm);
    reg(cm, cmd_tomo_cm);

    auto* recon = app.add_subcommand("recon", "reconstruct the Fock matrix");
    with_state(recon);
    recon->add_option("--tomo", o.tomo_file, "OpticalTomogram v1 file");
    recon->add_option("--cutoff", o.cutoff);
    reg(recon, cmd_recon);

    auto* classify = app.add_subcommand("classify", "classical / quantum classification");
    with_state(classify);
    classify->add_option("--tomo", o.tomo_file, "OpticalTomogram v1 file");
    classify->add_option("--cutoff", o.cutoff);
    reg(classify, cmd_classify);

    auto* fid = app.add_subcommand("fidelity", "fidelity of two tomograms");
    fid->add_option("--a", o.a, "file or state spec");
    fid->add_option("--b", o.b, "file or state spec");
    fid->add_option("--lambda-max", o.lambda_max);
    common(fid);
    reg(fid, cmd_fidelity);

    auto* entropy = app.add_subcommand("entropy", "entropies");
    entropy->require_subcommand(1);
    auto* ecv = entropy->add_subcommand("cv", "position and momentum tomographic entropies");
    with_state(ecv);
    reg(ecv, cmd_entropy_cv);
    auto* eren = entropy->add_subcommand("renyi", "Renyi entropies of the quadrature rows");
    with_state(eren);
    eren->add_option("--q", o.q);
    reg(eren, cmd_entropy_renyi);
    auto* etomo = entropy->add_subcommand("tomo", "spin tomographic entropy and its minimum");
    with_state(etomo);
    etomo->add_option("--q", o.q)->each([&](const std::string&) { o.has_q = true; });
    reg(etomo, cmd_entropy_tomo);

    auto* ineq = app.add_subcommand("ineq", "inequality checks");
    ineq->require_subcommand(1);
    auto* iur = ineq->add_subcommand("ur", "entropic uncertainty relation");
    with_state(iur);
    reg(iur, cmd_ineq_ur);
    auto* iren = ineq->add_subcommand("renyi-ur", "Renyi uncertainty relation");
    with_state(iren);
    iren->add_option("--theta", o.theta);
    reg(iren, cmd_ineq_renyi);
    auto* iqft = ineq->add_subcommand("spin-qft", "QFT entropic inequalities");
    with_state(iqft);
    iqft->add_option("--alpha", o.alpha);
    reg(iqft, cmd_ineq_qft);
    auto* isub = ineq->add_subcommand("subadd", "bipartite subadditivity");
    with_state(isub);
    isub->add_option("--dims", o.dims)->delimiter(',');
    reg(isub, cmd_ineq_subadd);
    auto* issa = ineq->add_subcommand("ssa", "tripartite strong subadditivity");
    with_state(issa);
    issa->add_option("--dims", o.dims)->delimiter(',');
    reg(issa, cmd_ineq_ssa);
    auto* ibnd = ineq->add_subcommand("bounds", "measurement entropic bounds (standard vs QFT basis)");
    with_state(ibnd);
    reg(ibnd, cmd_ineq_bounds);

    auto* haar = app.add_subcommand("haar", "Haar Monte-Carlo");
    haar->require_subcommand(1);
    auto* avg = haar->add_subcommand("avg", "group-average tomographic entropy");
    with_state(avg);
    double pair_alpha = 0.0;
    avg->add_option("--alpha", pair_alpha, "Renyi pair order alpha (beta = alpha/(2 alpha - 1))");
    reg(avg, [&](const Options& opt, Emitter& e) {
        Options copy = opt;
        copy.alpha = pair_alpha;
        return cmd_haar_avg(copy, e);
    });

    auto* self = app.add_subcommand("selftest", "run the acceptance suite");
    common(self);
    reg(self, cmd_selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 1;
    }

    try {
        for (const auto& [c, f] : commands)
            if (c->parsed()) {
                code = f(o, emitter);
                break;
            }
        const std::string text = emitter.render(o.json);
        const bool data_out = optical->parsed() || sympl->parsed() || cm->parsed() || recon->parsed();
        if (!o.out.empty() && !data_out) {
            write_text(o, text);
        } else {
            std::cout << text;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::invalid_input: return 1;
            case ErrorKind::validation: return 2;
            case ErrorKind::numerical: return 3;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return code;
}
