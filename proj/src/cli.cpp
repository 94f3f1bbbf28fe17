#include "mab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "mab/autocorrelation.hpp"
#include "mab/geometric_phase.hpp"
#include "mab/model.hpp"
#include "mab/phase.hpp"
#include "mab/propagation.hpp"
#include "mab/spectrum.hpp"
#include "mab/table.hpp"

namespace mab::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;
constexpr double kStrictAdiabaticity = 0.01;
constexpr double kBoRegimeThreshold = 10.0;  // 2k^2 at or above this counts as ">> 1"

class RegimeViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    double k = 2.0;
    double xi = 0.5;
    std::optional<double> r_ref;
    std::string format = "csv";
    std::string out_dir;
    std::string stem;
    bool strict = false;
};

struct SurfacesOptions {
    double r_max = 6.0;
    int n = 600;
    bool no_born_huang = false;
};

struct DynamicsOptions {
    double omega = 0.01;
    double theta0 = 0.0;
    double loops = 1.0;
    std::optional<double> sweep;
    std::optional<double> duration;
    std::string schedule = "uniform";
    double ramp_time = 0.0;
    std::optional<double> dt;
    std::size_t every = 8;
};

struct BerryOptions {
    double theta0 = 0.0;
    std::string sweep = "0:6.28:0.01";
    std::string gauge = "zero";
    std::size_t grid_n = 10000;
};

struct HolonomyOptions {
    std::string path;
};

struct SpectrumOptions {
    std::optional<double> r_max;
    int n = 1200;
    int n_eigs = 3;
    std::vector<double> j_list;
};

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) throw DomainError(std::string(name) + " must be finite");
}

ModelParams make_params(const CommonOptions& o, bool allow_zero_k) {
    require_finite(o.k, "k");
    require_finite(o.xi, "xi");
    if (o.r_ref) require_finite(*o.r_ref, "r_ref");
    if (allow_zero_k ? o.k < 0.0 : o.k <= 0.0)
        throw DomainError(allow_zero_k ? "k must be >= 0" : "k must be > 0");
    return ModelParams(o.k, o.xi, o.r_ref);
}

fs::path output_dir(const CommonOptions& o) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (const char* env = std::getenv("MAB_OUT_DIR"); env != nullptr && *env != '\0') return env;
    return ".";
}

fs::path output_file(const CommonOptions& o, const std::string& command, const std::string& suffix) {
    const fs::path dir = output_dir(o);
    fs::create_directories(dir);
    return dir / ((o.stem.empty() ? command : o.stem) + suffix);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    return file;
}

json cell_json(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? json(*d) : json(nullptr);
    if (const auto* i = std::get_if<long long>(&cell)) return json(*i);
    return json(std::get<std::string>(cell));
}

json table_json(const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.header[i]] = cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

fs::path write_table(const Table& table, const CommonOptions& o, const std::string& command) {
    const bool as_json = o.format == "json";
    const fs::path path = output_file(o, command, as_json ? ".json" : ".csv");
    auto file = open_output(path);
    if (as_json)
        file << table_json(table).dump(2) << '\n';
    else
        write_csv(file, table);
    return path;
}

json finite_or_null(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

json model_json(const ModelParams& p) {
    return {{"k", p.k()}, {"xi", p.xi()}, {"r_ref", p.r_ref()}, {"canonical_xi", p.canonical()}};
}

json margins_json(const ModelParams& p, std::optional<double> theta_dot) {
    const double bo = bo_regime_margin(p);
    json m = {{"bo_regime", bo}, {"bo_regime_ok", bo >= kBoRegimeThreshold}};
    if (theta_dot && p.k() > 0.0) {
        const double a = adiabaticity_margin(p, *theta_dot);
        m["adiabaticity"] = a;
        m["adiabatic_ok"] = a <= kStrictAdiabaticity;
    } else {
        m["adiabaticity"] = nullptr;
    }
    return m;
}

void check_bo_regime(const ModelParams& p, bool strict) {
    if (strict && bo_regime_margin(p) < 1.0)
        throw RegimeViolation("Born-Oppenheimer margin 2k^2 = " + std::to_string(bo_regime_margin(p)) +
                              " is below 1");
}

std::vector<double> parse_sweep(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw DomainError("trailing characters");
        } catch (const std::exception&) {
            throw DomainError("bad sweep '" + text + "' (expected start:stop:step)");
        }
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0] || !std::isfinite(parts[1]))
        throw DomainError("bad sweep '" + text + "' (expected start:stop:step with step > 0)");
    const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    if (count > 10'000'000) throw DomainError("sweep has too many points");
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = parts[0] + parts[2] * static_cast<double>(i);
    return values;
}

double distance_to_jump(double xi, double delta) {
    const double spacing = kPi / std::abs(xi);
    const double shifted = delta - 0.5 * spacing;
    return std::abs(shifted - spacing * std::round(shifted / spacing));
}

// --- surfaces ----------------------------------------------------------------------------

json cmd_surfaces(const CommonOptions& common, const SurfacesOptions& o, const std::string& command) {
    const ModelParams params = make_params(common, false);
    check_bo_regime(params, common.strict);
    require_finite(o.r_max, "r-max");
    if (!(o.r_max > 0.0) || o.n < 1) throw DomainError("surfaces needs r-max > 0 and n >= 1");
    const bool bh = !o.no_born_huang;

    Table table{{"r", "E_minus", "E_plus", "born_huang"}, {}};
    for (int i = 1; i <= o.n; ++i) {
        const double r = o.r_max * static_cast<double>(i) / static_cast<double>(o.n);
        const SurfaceSample s = potential_surfaces(params, r, bh);
        table.add_row({s.r, s.e_minus, s.e_plus, static_cast<long long>(bh ? 1 : 0)});
    }
    const fs::path path = write_table(table, common, command);
    return {{"parameters", {{"model", model_json(params)}, {"r_max", o.r_max}, {"n", o.n}, {"born_huang", bh}}},
            {"margins", margins_json(params, std::nullopt)},
            {"rows", table.rows.size()},
            {"output", path.string()}};
}

// --- dynamics ----------------------------------------------------------------------------

json cmd_dynamics(const CommonOptions& common, const DynamicsOptions& o, const std::string& command) {
    const ModelParams params = make_params(common, false);
    for (double v : {o.omega, o.theta0, o.loops, o.ramp_time}) require_finite(v, "schedule value");
    const double margin = adiabaticity_margin(params, o.omega);
    if (common.strict && margin > kStrictAdiabaticity)
        throw RegimeViolation("adiabaticity margin " + std::to_string(margin) + " exceeds " +
                              std::to_string(kStrictAdiabaticity));
    check_bo_regime(params, common.strict);
    if (o.every == 0) throw DomainError("every must be positive");

    const double period = fast_period(params);
    const double dt = o.dt.value_or(period / 64.0);
    check_time_step(params, dt);

    PseudorotationSchedule::Form form;
    if (o.schedule == "uniform")
        form = PseudorotationSchedule::Form::uniform;
    else if (o.schedule == "ramp")
        form = PseudorotationSchedule::Form::smooth_ramp;
    else
        throw DomainError("unknown schedule '" + o.schedule + "'");

    const double sweep = o.sweep.value_or(2.0 * kPi * o.loops);
    double duration = 0.0;
    if (o.duration) {
        duration = *o.duration;
    } else if (o.omega != 0.0) {
        duration = PseudorotationSchedule::duration_for_sweep(form, o.omega, o.ramp_time, sweep);
    } else {
        duration = 100.0 * period;
    }
    const auto schedule = form == PseudorotationSchedule::Form::uniform
                              ? PseudorotationSchedule::uniform(o.theta0, o.omega, duration)
                              : PseudorotationSchedule::smooth_ramp(o.theta0, o.omega, o.ramp_time, duration);

    const AutocorrelationTrace model = adiabatic_average(integrate_model_ode(params, schedule, dt), params);
    const std::vector<double> phi = relative_angle(model);
    const ClosedFormDeviation model_dev = deviation_from_closed_form(model, params);

    PropagationOptions prop;
    prop.dt = dt;
    const RotationTrajectory rotation = propagate_heisenberg(params, schedule, prop);
    const AutocorrelationTrace exact = adiabatic_average(autocorrelation_from_rotation(rotation), params);
    const ClosedFormDeviation exact_dev = deviation_from_closed_form(exact, params);

    const SpinTrajectory rotating = propagate_tdse(params, schedule, Frame::rotating, prop);
    const SpinTrajectory lab = propagate_tdse(params, schedule, Frame::lab, prop);
    const std::vector<double> gamma = geometric_phase_from_tdse(lab);

    const std::size_t n = model.times.size();
    if (rotation.times.size() != n || lab.times.size() != n || rotating.times.size() != n)
        throw std::runtime_error("dynamics: trajectories are not aligned");

    const Vec3 bloch0 = bloch_vector(rotating.states.front());
    double picture_dev = 0.0;
    double gamma_dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        picture_dev = std::max(picture_dev, (rotation.rotations[i] * bloch0 - bloch_vector(rotating.states[i]))
                                                .cwiseAbs()
                                                .maxCoeff());
        const double delta = lab.thetas[i] - o.theta0;
        if (!std::isnan(gamma[i]) && distance_to_jump(params.xi(), delta) >= 0.1)
            gamma_dev = std::max(gamma_dev,
                                 angular_distance(gamma[i], noncyclic_phase_closed_form(params.xi(), delta)));
    }

    Table table{{"t",          "theta",        "delta_theta",  "C",           "S",          "C_bar",
                 "S_bar",      "phi",          "C_bar_closed", "S_bar_closed", "phi_closed", "C_exact",
                 "S_exact",    "C_bar_exact",  "S_bar_exact",  "R_xx",        "R_xy",       "R_xz",
                 "R_yx",       "R_yy",         "R_yz",         "R_zx",        "R_zy",       "R_zz",
                 "psi0_re",    "psi0_im",      "psi1_re",      "psi1_im",     "gamma_tdse", "gamma_closed",
                 "one_sided"},
                {}};
    for (std::size_t i = 0; i < n; ++i) {
        if (i % o.every != 0 && i + 1 != n) continue;
        const double delta = model.thetas[i] - o.theta0;
        const auto closed = averaged_closed_form(params, delta);
        const Mat3& r = rotation.rotations[i];
        const Spinor& psi = lab.states[i];
        table.add_row({model.times[i], model.thetas[i], delta, model.c[i], model.s[i], model.c_bar[i],
                       model.s_bar[i], phi[i], closed.c_bar, closed.s_bar, 2.0 * params.xi() * delta, exact.c[i],
                       exact.s[i], exact.c_bar[i], exact.s_bar[i], r(0, 0), r(0, 1), r(0, 2), r(1, 0), r(1, 1),
                       r(1, 2), r(2, 0), r(2, 1), r(2, 2), psi(0).real(), psi(0).imag(), psi(1).real(),
                       psi(1).imag(), gamma[i], noncyclic_phase_closed_form(params.xi(), delta),
                       static_cast<long long>(model.one_sided[i] ? 1 : 0)});
    }
    const fs::path path = write_table(table, common, command);

    const double final_delta = model.thetas.back() - o.theta0;
    return {
        {"parameters",
         {{"model", model_json(params)},
          {"schedule", o.schedule},
          {"omega", o.omega},
          {"theta0", o.theta0},
          {"ramp_time", o.ramp_time},
          {"duration", duration},
          {"dt_requested", dt},
          {"dt_used", rotation.step},
          {"steps", rotation.steps},
          {"averaging_window", model.window},
          {"window_alignment", model.window_alignment}}},
        {"margins", margins_json(params, o.omega)},
        {"final_delta_theta", final_delta},
        {"final_phi", finite_or_null(phi.back())},
        {"final_phi_closed", 2.0 * params.xi() * final_delta},
        {"model_ode_vs_closed_form",
         {{"max_abs_c_bar", model_dev.max_c_bar},
          {"max_abs_s_bar", model_dev.max_s_bar},
          {"max_abs_phi", model_dev.max_phi}}},
        {"exact_heisenberg_vs_closed_form",
         {{"max_abs_c_bar", exact_dev.max_c_bar},
          {"max_abs_s_bar", exact_dev.max_s_bar},
          {"max_abs_phi", exact_dev.max_phi},
          {"gated", false}}},
        {"invariants",
         {{"max_norm_deviation_lab", lab.max_norm_deviation},
          {"max_norm_deviation_rotating", rotating.max_norm_deviation},
          {"max_orthogonality_error", rotation.max_orthogonality_error},
          {"max_determinant_error", rotation.max_determinant_error},
          {"picture_equivalence_max_abs", picture_dev}}},
        {"geometric_phase_max_deviation_away_from_jumps", gamma_dev},
        {"rows", table.rows.size()},
        {"output", path.string()}};
}

// --- berry -------------------------------------------------------------------------------

json cmd_berry(const CommonOptions& common, const BerryOptions& o, const std::string& command) {
    require_finite(common.xi, "xi");
    require_finite(o.theta0, "theta0");
    const ModelParams params = make_params(common, true);
    const GaugeSpec gauge = GaugeSpec::parse(o.gauge, params.xi());
    const std::vector<double> deltas = parse_sweep(o.sweep);

    Table table{{"delta_theta", "theta", "overlap_modulus", "gamma_numeric", "gamma_closed", "pancharatnam_term",
                 "connection_term"},
                {}};
    double max_dev = 0.0;
    std::size_t undefined = 0;
    for (double delta : deltas) {
        const double theta = o.theta0 + delta;
        const double closed = noncyclic_phase_closed_form(params.xi(), delta);
        try {
            const BerryPhaseResult r = noncyclic_berry_phase(params.xi(), o.theta0, theta, gauge, o.grid_n);
            max_dev = std::max(max_dev, angular_distance(r.gamma_g, closed));
            table.add_row({delta, theta, r.overlap_modulus, r.gamma_g, closed, r.pancharatnam_term,
                           r.connection_term});
        } catch (const UndefinedPhaseError&) {
            ++undefined;
            const double modulus = std::abs(std::cos(params.xi() * delta));
            const double nan = std::numeric_limits<double>::quiet_NaN();
            table.add_row({delta, theta, modulus, nan, nan, nan, nan});
        }
    }
    const fs::path path = write_table(table, common, command);

    json jumps = json::array();
    for (const PhaseJump& j : detect_phase_jumps(params.xi(), o.theta0, deltas.front(), deltas.back(), true))
        jumps.push_back(j.delta_theta);
    const auto factor = mab_phase_factor(params.xi());
    return {{"parameters",
             {{"model", model_json(params)},
              {"theta0", o.theta0},
              {"sweep", o.sweep},
              {"gauge", o.gauge},
              {"grid_n", o.grid_n}}},
            {"margins", margins_json(params, std::nullopt)},
            {"jumps", jumps},
            {"mab_phase_factor", {{"re", factor.real()}, {"im", factor.imag()}}},
            {"max_abs_gamma_deviation", max_dev},
            {"undefined_samples", undefined},
            {"rows", table.rows.size()},
            {"output", path.string()}};
}

// --- holonomy ----------------------------------------------------------------------------

json cmd_holonomy(const CommonOptions& common, const HolonomyOptions& o, const std::string& command) {
    const ModelParams params = make_params(common, true);
    std::ifstream in(o.path);
    if (!in) throw DomainError("cannot read path file '" + o.path + "'");
    std::vector<PlanarPoint> points = read_path_csv(in);
    const bool closed = PlanarPath::looks_closed(points);
    const PlanarPath path(std::move(points), closed);
    const HolonomyResult h = holonomy_line_integral(params.xi(), path);

    json result = {{"line_integral", h.line_integral},
                   {"closed", h.closed},
                   {"winding", h.closed ? json(h.winding) : json(nullptr)},
                   {"phase_factor", {{"re", h.phase_factor.real()}, {"im", h.phase_factor.imag()}}},
                   {"samples", path.samples().size()}};
    const fs::path out = output_file(common, command, ".json");
    auto file = open_output(out);
    file << result.dump(2) << '\n';

    result["parameters"] = {{"model", model_json(params)}, {"path", o.path}};
    result["margins"] = margins_json(params, std::nullopt);
    result["output"] = out.string();
    return result;
}

// --- spectrum ----------------------------------------------------------------------------

json comparison_json(const SpectrumComparison& cmp) {
    json band = json::array();
    for (const auto& s : cmp.lowest_band)
        band.push_back({{"j", s.j},
                        {"exact_splitting", s.exact_splitting},
                        {"bo_splitting", s.bo_splitting},
                        {"relative_error", finite_or_null(s.relative_error)}});
    return {{"reference_j", cmp.reference_j},
            {"max_level_relative_error", cmp.max_level_relative_error},
            {"max_splitting_relative_error", cmp.max_splitting_relative_error},
            {"lowest_band", band}};
}

double oscillator_limit_error(const SpectrumResult& result) {
    double worst = 0.0;
    for (const auto& block : result.blocks) {
        std::vector<double> analytic;
        const std::size_t count = block.eigenvalues.size();
        for (int m : {block.m0, block.m1})
            for (std::size_t nr = 0; nr < count; ++nr) analytic.push_back(2.0 * nr + std::abs(m) + 1.0);
        std::sort(analytic.begin(), analytic.end());
        for (std::size_t i = 0; i < count; ++i)
            worst = std::max(worst, std::abs(block.eigenvalues[i] - analytic[i]));
    }
    return worst;
}

json cmd_spectrum(const CommonOptions& common, const SpectrumOptions& o, const std::string& command) {
    const ModelParams params = make_params(common, true);
    check_bo_regime(params, common.strict);
    RadialGrid grid = RadialGrid::defaults(params);
    if (o.r_max) {
        require_finite(*o.r_max, "r-max");
        grid.r_max = *o.r_max;
    }
    grid.n = o.n;
    grid.validate(params);
    if (o.n_eigs < 1 || o.n_eigs > grid.n) throw DomainError("n-eigs out of range");
    const std::vector<double> j_list = o.j_list.empty() ? default_j_list(params.xi()) : o.j_list;
    const std::vector<int> m_list = bo_m_list(params.xi(), j_list);

    const SpectrumResult exact = exact_spectrum(params, j_list, grid, o.n_eigs);
    const BOLevels with_bh = bo_spectrum(params, m_list, grid, true, o.n_eigs);
    const BOLevels without_bh = bo_spectrum(params, m_list, grid, false, o.n_eigs);

    Table table{{"xi", "k", "j", "level_index", "energy", "source"}, {}};
    for (const auto& block : exact.blocks)
        for (std::size_t i = 0; i < block.eigenvalues.size(); ++i)
            table.add_row({params.xi(), params.k(), block.j, static_cast<long long>(i), block.eigenvalues[i],
                           std::string("exact")});
    for (const BOLevels* bo : {&with_bh, &without_bh})
        for (const auto& level : bo->levels)
            for (std::size_t i = 0; i < level.eigenvalues.size(); ++i)
                table.add_row({params.xi(), params.k(), level.j_eff, static_cast<long long>(i),
                               level.eigenvalues[i], std::string(bo->include_born_huang ? "bo_with_bh" : "bo_without_bh")});
    const fs::path path = write_table(table, common, command);

    const BlockSpectrum& ground = exact.ground_block();
    const MultisetCheck multiset = compare_angular_multisets(params.xi(), 64);
    // r^2/2 - k r^{2|xi|} is bounded below unless the coupling grows at least as fast as r^2.
    const double power = params.coupling_power();
    const bool bounded = power < 2.0 || (power == 2.0 && params.k() <= 0.5) || params.k() == 0.0;

    json summary = {
        {"parameters",
         {{"model", model_json(params)}, {"r_max", grid.r_max}, {"n", grid.n}, {"n_eigs", o.n_eigs},
          {"j_list", j_list}}},
        {"margins", margins_json(params, std::nullopt)},
        {"potential_bounded_below", bounded},
        {"ground", {{"j", ground.j}, {"energy", ground.eigenvalues.front()}}},
        {"pair_degeneracy_max_abs", max_pair_degeneracy_error(exact)},
        {"bo_angular_multiset_matches_unshifted",
         {{"equal", multiset.equal}, {"first_mismatch", multiset.equal ? json(nullptr) : json(multiset.first_mismatch)},
          {"cutoff", 64}}},
        {"rows", table.rows.size()},
        {"output", path.string()}};
    if (exact.find(ground.j) && with_bh.find_j(ground.j)) {
        summary["comparison_bo_with_bh"] = comparison_json(compare_spectra(exact, with_bh));
        summary["comparison_bo_without_bh"] = comparison_json(compare_spectra(exact, without_bh));
    }
    if (params.k() == 0.0) summary["oscillator_limit_max_abs"] = oscillator_limit_error(exact);
    return summary;
}

// -----------------------------------------------------------------------------------------

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--k", o.k, "vibronic coupling strength k");
    sub->add_option("--xi", o.xi, "effect order xi (1/2 linear, -1 quadratic)");
    sub->add_option("--r-ref", o.r_ref, "reference radius (default k)");
    sub->add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out-dir", o.out_dir, "output directory (default $MAB_OUT_DIR or .)");
    sub->add_option("--stem", o.stem, "output file stem (default: command name)");
    sub->add_flag("--strict", o.strict, "exit 3 on regime violations");
}

// Splits "--config FILE" / "--config=FILE" out of the argument list.
std::optional<std::string> extract_config(std::vector<std::string>& args) {
    std::optional<std::string> config;
    for (std::size_t i = 1; i < args.size();) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    return config;
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw DomainError("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        std::replace(key.begin(), key.end(), '_', '-');
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for the molecular Aharonov-Bohm effect in the E x e Jahn-Teller model",
                 "mab"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CommonOptions common;
    SurfacesOptions surfaces;
    DynamicsOptions dynamics;
    BerryOptions berry;
    HolonomyOptions holonomy;
    SpectrumOptions spectrum;

    auto* s_cmd = app.add_subcommand("surfaces", "tabulate the adiabatic potential surfaces");
    add_common(s_cmd, common);
    s_cmd->add_option("--r-max", surfaces.r_max, "largest radius");
    s_cmd->add_option("--n", surfaces.n, "number of radii r_max*i/n, i = 1..n");
    s_cmd->add_flag("--no-born-huang", surfaces.no_born_huang, "omit the 1/(8 r^2) term");

    auto* d_cmd = app.add_subcommand("dynamics", "spin dynamics, autocorrelations and relative angle");
    add_common(d_cmd, common);
    d_cmd->add_option("--omega", dynamics.omega, "pseudorotation rate (maximum rate for ramps)");
    d_cmd->add_option("--theta0", dynamics.theta0, "initial angle");
    d_cmd->add_option("--loops", dynamics.loops, "number of loops to sweep");
    d_cmd->add_option("--sweep", dynamics.sweep, "total angle to sweep (overrides --loops)");
    d_cmd->add_option("--duration", dynamics.duration, "total time (overrides sweep)");
    d_cmd->add_option("--schedule", dynamics.schedule, "uniform or ramp")->check(CLI::IsMember({"uniform", "ramp"}));
    d_cmd->add_option("--ramp-time", dynamics.ramp_time, "ramp time for --schedule ramp");
    d_cmd->add_option("--dt", dynamics.dt, "time step (default pi/(64 k^2))");
    d_cmd->add_option("--every", dynamics.every, "write every n-th sample");

    auto* b_cmd = app.add_subcommand("berry", "noncyclic Berry phase sweep");
    add_common(b_cmd, common);
    b_cmd->add_option("--theta0", berry.theta0, "initial angle");
    b_cmd->add_option("--sweep", berry.sweep, "start:stop:step in theta - theta0");
    b_cmd->add_option("--gauge", berry.gauge, "zero | single | fourier:a0=..,a1=..,b1=..,c=..");
    b_cmd->add_option("--grid-n", berry.grid_n, "quadrature intervals (>= 100)");

    auto* h_cmd = app.add_subcommand("holonomy", "line integral of the vector potential along a path");
    add_common(h_cmd, common);
    h_cmd->add_option("--path", holonomy.path, "CSV file with x,y columns")->required();

    auto* p_cmd = app.add_subcommand("spectrum", "exact and Born-Oppenheimer vibronic spectra");
    add_common(p_cmd, common);
    p_cmd->add_option("--r-max", spectrum.r_max, "radial cutoff (default max(r_ref + 8, 12))");
    p_cmd->add_option("--n", spectrum.n, "radial grid points");
    p_cmd->add_option("--n-eigs", spectrum.n_eigs, "levels per block");
    p_cmd->add_option("--j", spectrum.j_list, "comma-separated j values")->delimiter(',');

    std::vector<std::string> args = raw_args;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (const auto config = extract_config(args)) {
            // Config values go right after the subcommand so explicit flags (later) win.
            auto tokens = config_tokens(*config);
            std::size_t pos = 1;
            while (pos < args.size() && !app.get_subcommand_no_throw(args[pos])) ++pos;
            if (pos < args.size()) args.insert(args.begin() + static_cast<long>(pos) + 1, tokens.begin(), tokens.end());
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        json summary;
        std::string command;
        if (*s_cmd) {
            command = "surfaces";
            summary = cmd_surfaces(common, surfaces, command);
        } else if (*d_cmd) {
            command = "dynamics";
            summary = cmd_dynamics(common, dynamics, command);
        } else if (*b_cmd) {
            command = "berry";
            summary = cmd_berry(common, berry, command);
        } else if (*h_cmd) {
            command = "holonomy";
            summary = cmd_holonomy(common, holonomy, command);
        } else {
            command = "spectrum";
            summary = cmd_spectrum(common, spectrum, command);
        }
        summary["command"] = command;
        summary["tool_version"] = kToolVersion;
        summary["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const fs::path summary_path = output_file(common, command, "_summary.json");
        auto file = open_output(summary_path);
        file << summary.dump(2) << '\n';
        out << summary.dump(2) << '\n';
        return kSuccess;
    } catch (const RegimeViolation& e) {
        err << "regime violation: " << e.what() << '\n';
        return kRegimeViolation;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace mab::cli
