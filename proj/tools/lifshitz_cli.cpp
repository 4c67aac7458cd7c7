#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lifshitz/casimir.hpp"
#include "lifshitz/errors.hpp"
#include "lifshitz/fdt_lab.hpp"
#include "lifshitz/response.hpp"

using namespace lifshitz;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Params {
    std::string model = "plasma";
    double omega_p = 1.0;
    double gamma = 0.0;
    double a = 1.0;
    std::string sigma = "TM";
    double k = 1.0;
    double temperature = 0.0;
    double rel_tol = 1e-10;
    double omega_cut = 0.0;
    long max_terms = 0;
    long m_max = 20;
    double coupling = 1.0;
    double beta = 1.0;
    double omega0 = 1.0;
    std::string preset = "two-level";
    std::string matrix_file;
    std::string observable;
};

// Numerical outcome of one run: the report body plus the two CSV columns.
struct Computed {
    json body;
    double result = 0.0;
    double aux = 0.0;
    bool check_failed = false;
};

DispersionModel make_model(const Params& p)
{
    const ModelKind kind = parse_model_kind(p.model);
    return kind == ModelKind::Plasma ? DispersionModel::plasma(p.omega_p)
                                     : DispersionModel::drude(p.omega_p, p.gamma);
}

CavityConfig make_cavity(const Params& p)
{
    CavityConfig c;
    c.half_gap = p.a;
    c.model = make_model(p);
    c.sigma = parse_polarization(p.sigma);
    c.validate();
    return c;
}

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
}

json model_inputs(const Params& p)
{
    json j;
    j["model"] = p.model;
    j["omega_p"] = p.omega_p;
    j["gamma"] = p.gamma;
    return j;
}

json truncation_json(const TruncationReport& t)
{
    json j;
    j["quadrature_error"] = t.quadrature_error;
    j["tail_bound"] = t.tail_bound;
    j["evaluations"] = t.evaluations;
    j["matsubara_terms"] = t.matsubara_terms;
    j["k_decay_scale"] = t.k_decay_scale;
    j["zeta_decay_scale"] = t.zeta_decay_scale;
    j["omega_cut"] = t.omega_cut;
    return j;
}

json complex_json(cplx z)
{
    return json::array({z.real() + 0.0, z.imag() + 0.0});
}

json inputs_for(const std::string& cmd, const Params& p)
{
    json j;
    if (cmd == "fdt-check") {
        j["preset"] = p.matrix_file.empty() ? json(p.preset) : json(nullptr);
        j["matrix_file"] = p.matrix_file.empty() ? json(nullptr) : json(p.matrix_file);
        j["observable"] = p.observable;
        j["beta"] = p.beta;
        j["omega0"] = p.omega0;
        return j;
    }
    j = model_inputs(p);
    if (cmd == "poles") {
        j["coupling"] = p.coupling;
        j["beta"] = p.beta;
        return j;
    }
    j["a"] = p.a;
    if (cmd == "spectrum" || cmd == "equivalence-check") {
        j["sigma"] = p.sigma;
        j["k"] = p.k;
    }
    if (cmd == "equivalence-check")
        j["omega_cut"] = p.omega_cut;
    if (cmd == "free-energy" || cmd == "pressure" || cmd == "anomaly")
        j["T"] = p.temperature;
    if (cmd == "free-energy")
        j["max_terms"] = p.max_terms;
    if (cmd == "anomaly")
        j["m_max"] = p.m_max;
    if (cmd == "energy" || cmd == "free-energy" || cmd == "pressure")
        j["rel_tol"] = p.rel_tol;
    return j;
}

Computed run_energy(const Params& p)
{
    const CavityConfig c = make_cavity(p);
    const EnergyResult e = energy_imaginary_axis(c, {p.rel_tol});
    const double l = 2.0 * p.a;
    Computed out;
    out.result = e.value;
    out.aux = e.value * l * l * l;
    out.body["value"] = e.value;
    out.body["units"] = "hbar omega_p^3 / c^2 (energy per unit area)";
    out.body["route"] = to_string(e.route);
    out.body["truncation_report"] = truncation_json(e.truncation);
    out.body["checks"] = {{"attractive", e.value < 0.0}, {"energy_times_gap_cubed", out.aux}};
    return out;
}

Computed run_free_energy(const Params& p)
{
    require_positive(p.temperature, "T");
    const CavityConfig c = make_cavity(p);
    MatsubaraGrid g{p.temperature, p.max_terms, 1e-12};
    const EnergyResult f = free_energy_matsubara(c, g, {p.rel_tol});
    const EnergyResult e = energy_imaginary_axis(c, {p.rel_tol});
    Computed out;
    out.result = f.value;
    out.aux = e.value;
    out.body["value"] = f.value;
    out.body["units"] = "hbar omega_p^3 / c^2 (free energy per unit area)";
    out.body["route"] = to_string(f.route);
    out.body["truncation_report"] = truncation_json(f.truncation);
    out.body["checks"] = {{"zero_temperature_energy", e.value},
                          {"relative_difference", std::abs(f.value / e.value - 1.0)}};
    return out;
}

Computed run_pressure(const Params& p)
{
    const CavityConfig c = make_cavity(p);
    std::optional<MatsubaraGrid> g;
    if (p.temperature > 0.0)
        g = MatsubaraGrid{p.temperature, p.max_terms, 1e-12};
    else if (p.temperature < 0.0)
        throw Error(ErrorCode::InvalidArgument, "T must be >= 0");
    const PressureResult r = casimir_pressure(c, g, {p.rel_tol});
    const double l = 2.0 * p.a;
    Computed out;
    out.result = r.value;
    out.aux = r.value * l * l * l * l;
    out.body["value"] = r.value;
    out.body["units"] = "hbar omega_p^4 / c^3 (pressure)";
    out.body["route"] = to_string(g ? EnergyRoute::Matsubara : EnergyRoute::ImaginaryAxis);
    out.body["truncation_report"] = {{"error_estimate", r.error_estimate}, {"step", r.step}, {"widened", r.widened}};
    out.body["checks"] = {{"attractive", r.value < 0.0}, {"pressure_times_gap_fourth", out.aux}};
    return out;
}

Computed run_spectrum(const Params& p)
{
    require_positive(p.k, "k");
    const CavityConfig c = make_cavity(p);
    const KPoint kp = KPoint::make(p.k, c.model);
    const ModeSpectrum ms = find_modes(c, kp);
    json phase = json::array();
    for (const auto& s : ms.phase_curve)
        phase.push_back(json::array({s.omega, s.delta}));
    Computed out;
    out.result = static_cast<double>(ms.surface_modes.size() + ms.waveguide_modes.size());
    out.aux = ms.max_residual;
    out.body["value"] = {{"kpoint", {{"k", kp.k}, {"omega_minus", kp.omega_minus}, {"omega_plus", kp.omega_plus}}},
                         {"surface_modes", ms.surface_modes},
                         {"waveguide_modes", ms.waveguide_modes},
                         {"reflection_poles", ms.reflection_poles},
                         {"phase_curve", phase}};
    out.body["units"] = "omega_p (frequencies)";
    out.body["route"] = "real-axis-bracketing";
    out.body["truncation_report"] = {{"omega_cut", ms.omega_cut}};
    out.body["checks"] = {{"max_residual", ms.max_residual},
                          {"surface_winding", ms.surface_winding},
                          {"waveguide_winding", ms.waveguide_winding},
                          {"residual_below_1e-9", ms.max_residual < 1e-9}};
    return out;
}

Computed run_poles(const Params& p)
{
    ToyGreenModel m;
    m.g = p.coupling;
    m.dispersion = make_model(p);
    const PoleCatalog cat = pole_catalog(m);
    const FdtCompatibilityReport rep = fdt_compatibility_report(m, p.beta);
    json poles = json::array();
    for (const auto& pole : cat.poles)
        poles.push_back({{"location", complex_json(pole.location)},
                         {"residue", complex_json(pole.residue)},
                         {"class", to_string(pole.cls)}});
    Computed out;
    out.result = static_cast<double>(cat.poles.size());
    out.body["value"] = {{"poles", poles}, {"bypass", cat.bypass}};
    out.body["units"] = "omega_p (frequencies)";
    out.body["route"] = "closed-form";
    out.body["truncation_report"] = json::object();
    out.body["checks"] = {{"fdt_verdict", to_string(rep.verdict)},
                          {"im_part_real_comb", rep.im_part_real_comb},
                          {"positive_spectrum_constructible", rep.positive_spectrum_constructible},
                          {"reasons", rep.reasons}};
    return out;
}

Computed run_equivalence(const Params& p)
{
    require_positive(p.k, "k");
    const CavityConfig c = make_cavity(p);
    const KPoint kp = KPoint::make(p.k, c.model);
    const double cut = p.omega_cut > 0.0 ? p.omega_cut : 1000.0 * kp.omega_plus;
    const RealAxisReport r = energy_real_axis_per_k(c, kp, cut);
    Computed out;
    out.result = r.mismatch;
    out.aux = r.bound;
    out.body["value"] = {{"mode_sum_part", r.mode_sum_part},
                         {"branch_point_part", r.branch_point_part},
                         {"band_part", r.band_part},
                         {"continuum_part", r.continuum_part},
                         {"real_axis_total", r.real_axis_total},
                         {"imaginary_axis_part", r.imaginary_axis_part},
                         {"mismatch", r.mismatch},
                         {"bound", r.bound}};
    out.body["units"] = "hbar omega_p^2 (per-k energy bracket)";
    out.body["route"] = to_string(EnergyRoute::ModeSumRealAxis);
    out.body["truncation_report"] = truncation_json(r.truncation);
    out.body["checks"] = {{"passed", r.passed},
                          {"surface_modes", r.modes.surface_modes.size()},
                          {"waveguide_modes", r.modes.waveguide_modes.size()}};
    out.check_failed = !r.passed;
    return out;
}

Matrix matrix_from_json(const json& j)
{
    if (!j.is_array() || j.empty())
        throw Error(ErrorCode::InvalidArgument, "matrix must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw Error(ErrorCode::InvalidArgument, "matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c) {
            const json& e = row[static_cast<std::size_t>(c)];
            if (e.is_number())
                m(r, c) = e.get<double>();
            else if (e.is_array() && e.size() == 2)
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            else
                throw Error(ErrorCode::InvalidArgument, "matrix entries are numbers or [re, im] pairs");
        }
    }
    return m;
}

QuantumSystem load_system(const Params& p)
{
    if (!p.matrix_file.empty()) {
        std::ifstream in(p.matrix_file);
        if (!in)
            throw Error(ErrorCode::InvalidArgument, "cannot open matrix file '" + p.matrix_file + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidArgument, std::string("matrix file: ") + e.what());
        }
        if (!j.contains("hamiltonian") || !j.contains("observables") || !j["observables"].is_object())
            throw Error(ErrorCode::InvalidArgument, "matrix file needs 'hamiltonian' and 'observables'");
        std::vector<NamedObservable> obs;
        for (const auto& [name, m] : j["observables"].items())
            obs.push_back({name, matrix_from_json(m)});
        return QuantumSystem(matrix_from_json(j["hamiltonian"]), std::move(obs), p.beta);
    }
    if (p.preset == "two-level")
        return QuantumSystem::two_level(p.omega0, p.beta);
    const std::string osc = "oscillator:";
    if (p.preset.rfind(osc, 0) == 0) {
        int dim = 0;
        try {
            dim = std::stoi(p.preset.substr(osc.size()));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "preset oscillator:N needs an integer N");
        }
        return QuantumSystem::harmonic_oscillator(dim, p.omega0, 1.0, p.beta);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown preset '" + p.preset + "'");
}

Computed run_fdt(const Params& p)
{
    const QuantumSystem sys = load_system(p);
    std::string name = p.observable;
    if (name.empty())
        name = sys.observable_name(0);
    const FdtReport r = fdt_verify(sys, sys.observable_index(name));
    Computed out;
    out.result = r.abs_error;
    out.aux = r.lhs;
    out.body["value"] = {{"observable", name},
                         {"lhs", r.lhs},
                         {"rhs", r.rhs},
                         {"abs_error", r.abs_error},
                         {"lines_used", r.lines_used}};
    out.body["units"] = "observable squared";
    out.body["route"] = "exact-diagonalization";
    out.body["truncation_report"] = {{"dimension", sys.dim()}, {"eigen_residual", sys.eigen_residual()}};
    out.body["checks"] = {{"abs_error_below_1e-10", r.abs_error < 1e-10}};
    out.check_failed = !(r.abs_error < 1e-10);
    return out;
}

Computed run_anomaly(const Params& p)
{
    require_positive(p.temperature, "T");
    Params q = p;
    q.model = "drude";
    const CavityConfig c = make_cavity(q);
    const AnomalyResult r = drude_anomaly(c, p.temperature, p.m_max);
    json partial = json::array();
    for (const auto& s : r.partial_sums)
        partial.push_back(complex_json(s));
    Computed out;
    // + 0.0 folds a signed zero into +0
    out.result = r.value.imag() + 0.0;
    out.aux = r.value.real() + 0.0;
    out.body["value"] = {{"delta_F", complex_json(r.value)}, {"partial_sums", partial}};
    out.body["units"] = "hbar omega_p^3 / c^2 (free energy per unit area)";
    out.body["route"] = to_string(EnergyRoute::Matsubara);
    out.body["truncation_report"] = {{"tail_estimate", r.tail_estimate},
                                     {"noise_floor", r.noise_floor},
                                     {"terms", r.partial_sums.size()}};
    out.body["checks"] = {{"converged", r.converged},
                          {"above_noise", std::abs(r.value) > 10.0 * r.noise_floor},
                          {"one_sided_real_part", r.one_sided_real_part}};
    return out;
}

Computed dispatch(const std::string& cmd, const Params& p)
{
    if (cmd == "energy")
        return run_energy(p);
    if (cmd == "free-energy")
        return run_free_energy(p);
    if (cmd == "pressure")
        return run_pressure(p);
    if (cmd == "spectrum")
        return run_spectrum(p);
    if (cmd == "poles")
        return run_poles(p);
    if (cmd == "equivalence-check")
        return run_equivalence(p);
    if (cmd == "fdt-check")
        return run_fdt(p);
    if (cmd == "anomaly")
        return run_anomaly(p);
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + cmd + "'");
}

void set_parameter(Params& p, const std::string& name, double v)
{
    if (name == "a")
        p.a = v;
    else if (name == "T")
        p.temperature = v;
    else if (name == "gamma")
        p.gamma = v;
    else if (name == "k")
        p.k = v;
    else
        throw Error(ErrorCode::InvalidArgument, "parameter '" + name + "' is not sweepable (a, T, gamma, k)");
}

std::size_t thread_cap()
{
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LIFSHITZ_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw Error(ErrorCode::InvalidArgument, "LIFSHITZ_THREADS must be a positive integer");
        n = std::min(n, static_cast<std::size_t>(v));
    }
    return n;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string number(double v)
{
    return json(v).dump();
}

struct Row {
    double value = 0.0;
    double result = 0.0;
    double aux = 0.0;
    std::string error;
};

std::vector<Row> sweep(const std::string& cmd, const Params& base, const std::string& param,
                       const std::vector<double>& values)
{
    Params probe = base;
    set_parameter(probe, param, values.empty() ? 0.0 : values.front());
    std::vector<Row> rows(values.size());
    const std::size_t workers = std::min(thread_cap(), std::max<std::size_t>(1, values.size()));
    auto work = [&](std::size_t first) {
        for (std::size_t i = first; i < values.size(); i += workers) {
            Params p = base;
            rows[i].value = values[i];
            try {
                set_parameter(p, param, values[i]);
                const Computed c = dispatch(cmd, p);
                rows[i].result = c.result;
                rows[i].aux = c.aux;
            } catch (const Error& e) {
                rows[i].result = std::nan("");
                rows[i].aux = std::nan("");
                rows[i].error = std::string(error_name(e.code())) + ": " + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool)
        t.join();
    return rows;
}

void emit_error(const std::string& code, const std::string& msg, int status)
{
    json j;
    j["error"] = code;
    j["message"] = msg;
    j["exit_status"] = status;
    std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Casimir and fluctuation-dissipation calculator"};
    app.set_config("--config", "", "key = value configuration file; flags override it");
    app.require_subcommand(1);
    app.fallthrough();

    Params p;
    bool csv = false;
    bool verbose = false;
    std::string sweep_param;
    std::vector<double> sweep_values;

    app.add_option("--model", p.model, "plasma or drude");
    app.add_option("--omega-p", p.omega_p, "plasma frequency");
    app.add_option("--gamma", p.gamma, "Drude damping");
    app.add_option("--a", p.a, "half gap width");
    app.add_option("--sigma", p.sigma, "TE or TM");
    app.add_option("--k", p.k, "transverse wavenumber");
    app.add_option("--T", p.temperature, "temperature");
    app.add_option("--rel-tol", p.rel_tol, "relative tolerance");
    app.add_option("--omega-cut", p.omega_cut, "continuum cutoff (default 1000 omega_plus)");
    app.add_option("--max-terms", p.max_terms, "Matsubara terms (0: adaptive)");
    app.add_option("--m-max", p.m_max, "anomaly partial-sum length");
    app.add_option("--coupling", p.coupling, "toy Green function coupling g");
    app.add_option("--beta", p.beta, "inverse temperature for fdt-check and poles");
    app.add_option("--omega0", p.omega0, "preset level spacing");
    app.add_option("--preset", p.preset, "two-level or oscillator:N");
    app.add_option("--matrix-file", p.matrix_file, "JSON file with hamiltonian and observables");
    app.add_option("--observable", p.observable, "observable name for fdt-check");
    app.add_option("--sweep", sweep_param, "sweep parameter: a, T, gamma or k");
    app.add_option("--values", sweep_values, "comma-separated sweep values")->delimiter(',');
    app.add_flag("--csv", csv, "emit the sweep as CSV");
    app.add_flag("--verbose", verbose, "human-readable summary on standard error");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"energy", "zero-temperature energy (imaginary axis)"},
        {"free-energy", "Matsubara free energy"},
        {"pressure", "pressure from the energy or free energy"},
        {"spectrum", "discrete modes and phase curve at one k"},
        {"poles", "toy Green function poles and FDT verdict"},
        {"equivalence-check", "real-axis bracket against the imaginary-axis integral"},
        {"fdt-check", "fluctuation-dissipation check on a finite system"},
        {"anomaly", "Drude anomaly partial sums"}};
    for (const auto& [name, help] : commands)
        app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("ParseError", e.what(), kExitValidation);
        return kExitValidation;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        thread_cap();
        if (csv && sweep_param.empty())
            throw Error(ErrorCode::InvalidArgument, "--csv needs --sweep and --values");
        if (!sweep_param.empty()) {
            if (sweep_values.empty())
                throw Error(ErrorCode::InvalidArgument, "--sweep needs --values");
            const std::vector<Row> rows = sweep(cmd, p, sweep_param, sweep_values);
            std::ostringstream out;
            if (csv) {
                out << "parameter,value,result,aux,error\n";
                for (const Row& r : rows)
                    out << csv_field(sweep_param) << ',' << number(r.value) << ',' << number(r.result) << ','
                        << number(r.aux) << ',' << csv_field(r.error) << '\n';
            } else {
                json j;
                j["subcommand"] = cmd;
                j["inputs"] = inputs_for(cmd, p);
                j["sweep"] = sweep_param;
                json arr = json::array();
                for (const Row& r : rows)
                    arr.push_back({{"value", r.value},
                                   {"result", std::isnan(r.result) ? json(nullptr) : json(r.result)},
                                   {"aux", std::isnan(r.aux) ? json(nullptr) : json(r.aux)},
                                   {"error", r.error}});
                j["rows"] = arr;
                out << j.dump(2) << '\n';
            }
            std::cout << out.str() << std::flush;
            return kExitOk;
        }

        const Computed c = dispatch(cmd, p);
        json report;
        report["subcommand"] = cmd;
        report["inputs"] = inputs_for(cmd, p);
        for (const auto& [key, val] : c.body.items())
            report[key] = val;
        std::cout << report.dump(2) << '\n' << std::flush;
        if (verbose)
            std::cerr << cmd << ": result " << c.result << (c.check_failed ? " (check failed)" : "") << '\n';
        if (c.check_failed) {
            emit_error("CheckFailed", cmd + " check did not pass", kExitNumerical);
            return kExitNumerical;
        }
        return kExitOk;
    } catch (const Error& e) {
        const int status = is_numerical(e.code()) ? kExitNumerical : kExitValidation;
        emit_error(std::string(error_name(e.code())), e.what(), status);
        return status;
    } catch (const std::exception& e) {
        emit_error("InternalError", e.what(), kExitNumerical);
        return kExitNumerical;
    }
}
