#include "pita/config.hpp"

#include "pita/errors.hpp"
#include "pita/omega_study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace pita {

namespace {

struct KeyInfo {
    std::string_view key;
    std::string_view fallback;  // empty: required
    std::string_view help;
};

// Keys, defaults and one-line help. Required keys have no default.
constexpr KeyInfo kKeys[] = {
    {"mode", "parareal-semi", "euler-study | parareal-semi | parareal-classic"},
    {"system.A", "", "d x d matrix, rows separated by ';'"},
    {"system.B", "", "d x m matrix, rows separated by ';'"},
    {"system.u", "", "constant input, m entries"},
    {"system.y0", "", "initial state, d entries"},
    {"grid.t0", "0", "start time"},
    {"grid.Tf", "", "final time"},
    {"grid.N", "", "number of slices"},
    {"h0", "0", "reference/coarse step; 0 = slice length"},
    {"euler.deltas", "1 2 4 8 16 32 64 128 256 512", "subdivision ladder for euler-study"},
    {"parareal.K", "8", "correction passes"},
    {"schedule.delta_base", "100", "delta at the first correction pass"},
    {"schedule.delta_step", "1", "delta increment per pass"},
    {"schedule.delta1", "0.5", "lower delta-distance bound"},
    {"schedule.delta2", "1.5", "upper delta-distance bound"},
    {"classic.fine_step", "0.001", "fine step h_f (classic mode)"},
    {"classic.coarse", "implicit", "coarse propagator (classic mode): implicit | explicit"},
    {"accel.k", "4", "epsilon order (even)"},
    {"accel.n", "2", "starting index"},
    {"accel.rho", "1", "scaling factor"},
    {"accel.Sb0", "0", "initial term of the auxiliary series"},
    {"accel.aux_form", "literal", "literal | summed | off"},
    {"accel.guard", "1e-12", "epsilon small-denominator guard"},
    {"anneal.q_min", "1e-12", "lower bound on q"},
    {"anneal.q_max", "10", "upper bound on q"},
    {"anneal.q_initial", "0", "starting q; 0 = geometric mean of bounds"},
    {"anneal.initial_temp", "0", "0 = objective at the starting q"},
    {"anneal.cooling", "0.95", "geometric cooling factor"},
    {"anneal.steps", "2000", "proposals per chain"},
    {"anneal.proposal_scale", "0.5", "proposal std-dev in log10 units"},
    {"anneal.chains", "1", "independent chains (seeds seed, seed+1, ...)"},
    {"seed", "42", "annealing seed"},
    {"calib.h_tiny", "1e-5", "bootstrap reference step"},
    {"calib.refresh", "0", "recalibration interval in slices; 0 = once at slice 1"},
    {"calib.reference", "bootstrap", "bootstrap | exact"},
    {"report.scale", "4", "report errors multiplied by 10^scale"},
    {"out", "out", "output directory"},
    {"threads", "0", "worker threads; 0 = all cores"},
};

constexpr std::string_view kDampedOscillator = R"(system.A = -1 5; -5 -1
system.B = 0; 1
system.u = 10
system.y0 = 0 1
)";

struct Preset {
    std::string_view name;
    std::string_view body;
};

// Delta steps are integral so the realized spacing survives rounding to whole
// fine steps.
constexpr Preset kPresets[] = {
    {"paper-sigma", R"(mode = parareal-semi
grid.t0 = 0
grid.Tf = 0.9
grid.N = 9
h0 = 0.1
parareal.K = 8
schedule.delta_base = 100
schedule.delta_step = 1
schedule.delta1 = 0.5
schedule.delta2 = 1.5
euler.deltas = 1 2 4 8 16 32 64 128 256 512
report.scale = 4
)"},
    {"paper-sigma-euler", R"(mode = euler-study
grid.t0 = 0
grid.Tf = 5
grid.N = 50
h0 = 0.1
euler.deltas = 1 2 4 8 16 32 64 128 256 512
accel.aux_form = off
)"},
    {"paper-sigma-table5", R"(mode = parareal-semi
grid.t0 = 0
grid.Tf = 0.9
grid.N = 9
h0 = 0.1
parareal.K = 8
schedule.delta_base = 500
schedule.delta_step = 5
schedule.delta1 = 0.5
schedule.delta2 = 10
report.scale = 4
)"},
    {"paper-sigma-classic", R"(mode = parareal-classic
grid.t0 = 0
grid.Tf = 0.9
grid.N = 9
h0 = 0.1
parareal.K = 9
classic.fine_step = 0.001
classic.coarse = implicit
accel.aux_form = off
report.scale = 4
)"},
};

struct Entry {
    std::string value;
    std::string origin;
};

using Entries = std::map<std::string, Entry, std::less<>>;

bool known_key(std::string_view key) {
    return std::any_of(std::begin(kKeys), std::end(kKeys),
                       [&](const KeyInfo& info) { return info.key == key; });
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

void set_entry(Entries& entries, std::string_view line, const std::string& origin) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(origin + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (!known_key(key)) {
        throw ConfigError(origin + ": unknown key '" + key + "'");
    }
    entries[key] = Entry{trim(line.substr(eq + 1)), origin};
}

void load_text(Entries& entries, std::string_view text, std::string_view source) {
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        set_entry(entries, line, std::string(source) + ":" + std::to_string(number));
    }
}

class Reader {
public:
    explicit Reader(const Entries& entries) : entries_(entries) {}

    [[nodiscard]] std::string raw(std::string_view key) const {
        if (auto it = entries_.find(key); it != entries_.end()) {
            return it->second.value;
        }
        const auto info = std::find_if(std::begin(kKeys), std::end(kKeys),
                                       [&](const KeyInfo& k) { return k.key == key; });
        if (info == std::end(kKeys) || info->fallback.empty()) {
            throw ConfigError("missing required key '" + std::string(key) + "'");
        }
        return std::string(info->fallback);
    }

    [[nodiscard]] double real(std::string_view key) const {
        return parse_real(raw(key), key);
    }

    [[nodiscard]] long integer(std::string_view key) const {
        const std::string text = raw(key);
        long value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            fail(key, "expected an integer, got '" + text + "'");
        }
        return value;
    }

    [[nodiscard]] std::vector<double> reals(std::string_view key) const {
        std::vector<double> values;
        std::string text = raw(key);
        std::replace(text.begin(), text.end(), ',', ' ');
        std::istringstream in(text);
        std::string token;
        while (in >> token) {
            values.push_back(parse_real(token, key));
        }
        if (values.empty()) {
            fail(key, "expected at least one number");
        }
        return values;
    }

    [[nodiscard]] Matrix matrix(std::string_view key) const {
        const std::string text = raw(key);
        std::vector<std::vector<double>> rows;
        std::istringstream in(text);
        std::string row;
        while (std::getline(in, row, ';')) {
            std::replace(row.begin(), row.end(), ',', ' ');
            std::istringstream cells(row);
            std::vector<double> values;
            std::string token;
            while (cells >> token) {
                values.push_back(parse_real(token, key));
            }
            if (!values.empty()) {
                rows.push_back(std::move(values));
            }
        }
        if (rows.empty()) {
            fail(key, "expected a matrix");
        }
        for (const auto& r : rows) {
            if (r.size() != rows.front().size()) {
                fail(key, "rows have different lengths");
            }
        }
        Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
            }
        }
        return m;
    }

    [[noreturn]] void fail(std::string_view key, const std::string& message) const {
        std::string where;
        if (auto it = entries_.find(key); it != entries_.end()) {
            where = " (" + it->second.origin + ")";
        }
        throw ConfigError("key '" + std::string(key) + "'" + where + ": " + message);
    }

private:
    double parse_real(const std::string& text, std::string_view key) const {
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
            fail(key, "expected a real number, got '" + text + "'");
        }
        return value;
    }

    const Entries& entries_;
};

Vector to_vector(const std::vector<double>& values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = values[i];
    }
    return v;
}

// Rethrows lower-level validation failures as configuration errors that name
// the key group at fault.
template <typename Fn>
void validated(std::string_view group, Fn&& fn) {
    try {
        fn();
    } catch (const ScheduleError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string(group) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw ConfigError(std::string(group) + ": " + e.what());
    }
}

ExperimentConfig build(const Entries& entries) {
    const Reader r(entries);
    ExperimentConfig cfg;

    const std::string mode = r.raw("mode");
    if (mode == "euler-study") {
        cfg.mode = Mode::euler_study;
    } else if (mode == "parareal-semi") {
        cfg.mode = Mode::parareal_semi;
    } else if (mode == "parareal-classic") {
        cfg.mode = Mode::parareal_classic;
    } else {
        r.fail("mode", "expected euler-study, parareal-semi or parareal-classic, got '" + mode + "'");
    }

    cfg.system.A = r.matrix("system.A");
    cfg.system.B = r.matrix("system.B");
    cfg.system.u = to_vector(r.reals("system.u"));
    cfg.system.y0 = to_vector(r.reals("system.y0"));
    validated("system", [&] { cfg.system = validate_system(cfg.system); });

    cfg.grid.t0 = r.real("grid.t0");
    cfg.grid.tf = r.real("grid.Tf");
    const long slices = r.integer("grid.N");
    if (slices < 1) {
        r.fail("grid.N", "must be at least 1");
    }
    cfg.grid.slices = static_cast<int>(slices);
    validated("grid", [&] { validate_grid(cfg.grid); });

    cfg.h0 = r.real("h0");
    if (cfg.h0 < 0.0) {
        r.fail("h0", "must be positive (or 0 for one step per slice)");
    }
    if (cfg.h0 == 0.0) {
        cfg.h0 = cfg.grid.slice_length();
    }
    validated("h0", [&] { step_count(0.0, cfg.grid.slice_length(), cfg.h0); });

    cfg.ladder.clear();
    for (double d : r.reals("euler.deltas")) {
        if (d != std::floor(d) || d < 1.0) {
            r.fail("euler.deltas", "subdivision factors must be positive integers");
        }
        cfg.ladder.push_back(static_cast<int>(d));
    }
    validated("euler.deltas", [&] { validate_subdivisions(cfg.subdivisions()); });

    cfg.iterations = static_cast<int>(r.integer("parareal.K"));
    cfg.schedule.delta_base = r.real("schedule.delta_base");
    cfg.schedule.delta_step = r.real("schedule.delta_step");
    cfg.schedule.delta1 = r.real("schedule.delta1");
    cfg.schedule.delta2 = r.real("schedule.delta2");
    cfg.fine_step = r.real("classic.fine_step");
    const std::string coarse = r.raw("classic.coarse");
    if (coarse == "implicit") {
        cfg.classic_coarse = PropagatorKind::implicit_euler;
    } else if (coarse == "explicit") {
        cfg.classic_coarse = PropagatorKind::explicit_euler;
    } else {
        r.fail("classic.coarse", "expected implicit or explicit, got '" + coarse + "'");
    }
    validated("parareal", [&] { validate_config(cfg.parareal_config()); });

    cfg.accel.k = static_cast<int>(r.integer("accel.k"));
    cfg.accel.n = static_cast<int>(r.integer("accel.n"));
    cfg.accel.rho = r.real("accel.rho");
    cfg.accel.denom_guard = r.real("accel.guard");
    AuxSeriesParams aux;
    aux.s_b0 = r.real("accel.Sb0");
    validated("accel.aux_form", [&] { aux.form = parse_aux_form(r.raw("accel.aux_form")); });
    cfg.accel.aux = aux;
    validated("accel", [&] { validate_spec(cfg.accel); });

    cfg.anneal.q_min = r.real("anneal.q_min");
    cfg.anneal.q_max = r.real("anneal.q_max");
    cfg.anneal.q_initial = r.real("anneal.q_initial");
    cfg.anneal.initial_temp = r.real("anneal.initial_temp");
    cfg.anneal.cooling = r.real("anneal.cooling");
    cfg.anneal.steps = static_cast<int>(r.integer("anneal.steps"));
    cfg.anneal.proposal_scale = r.real("anneal.proposal_scale");
    const long seed = r.integer("seed");
    if (seed < 0) {
        r.fail("seed", "must be non-negative");
    }
    cfg.anneal.seed = static_cast<std::uint64_t>(seed);
    validated("anneal", [&] { validate_anneal(cfg.anneal); });
    cfg.chains = static_cast<int>(r.integer("anneal.chains"));
    if (cfg.chains < 1) {
        r.fail("anneal.chains", "must be at least 1");
    }

    cfg.h_tiny = r.real("calib.h_tiny");
    if (!(cfg.h_tiny > 0.0)) {
        r.fail("calib.h_tiny", "must be positive");
    }
    validated("calib.h_tiny", [&] { step_count(0.0, cfg.grid.slice_length(), cfg.h_tiny); });
    cfg.refresh_interval = static_cast<int>(r.integer("calib.refresh"));
    if (cfg.refresh_interval < 0) {
        r.fail("calib.refresh", "must be non-negative");
    }
    const std::string reference = r.raw("calib.reference");
    if (reference == "bootstrap") {
        cfg.reference = ReferenceKind::bootstrap;
    } else if (reference == "exact") {
        cfg.reference = ReferenceKind::exact;
    } else {
        r.fail("calib.reference", "expected bootstrap or exact, got '" + reference + "'");
    }

    cfg.report_scale = static_cast<int>(r.integer("report.scale"));
    cfg.out_dir = r.raw("out");
    const long threads = r.integer("threads");
    if (threads < 0) {
        r.fail("threads", "must be non-negative");
    }
    cfg.threads = static_cast<unsigned>(threads);
    return cfg;
}

} // namespace

ParerealConfig ExperimentConfig::parareal_config() const {
    ParerealConfig pc;
    pc.grid = grid;
    pc.iterations = iterations;
    pc.coarse_step = h0;
    pc.threads = threads;
    if (mode == Mode::parareal_classic) {
        pc.mode = ClassicMode{fine_step, classic_coarse};
    } else {
        pc.mode = SemiExplicitMode{schedule};
    }
    return pc;
}

SubdivisionSet ExperimentConfig::subdivisions() const {
    return SubdivisionSet{h0, ladder};
}

long ExperimentConfig::coarse_instants() const {
    return step_count(grid.t0, grid.tf, h0);
}

ExperimentConfig parse_config(const ConfigSources& sources) {
    Entries entries;
    if (sources.preset) {
        load_text(entries, kDampedOscillator, "preset " + *sources.preset);
        load_text(entries, preset_text(*sources.preset), "preset " + *sources.preset);
    }
    if (sources.config_path) {
        std::ifstream in(*sources.config_path);
        if (!in) {
            throw IoError("cannot read config file '" + *sources.config_path + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        load_text(entries, buffer.str(), *sources.config_path);
    }
    for (const auto& item : sources.overrides) {
        set_entry(entries, item, "--set " + item);
    }
    if (sources.threads) {
        entries["threads"] = Entry{std::to_string(*sources.threads), "--threads"};
    }
    if (sources.seed) {
        entries["seed"] = Entry{std::to_string(*sources.seed), "--seed"};
    }
    if (sources.out_dir) {
        entries["out"] = Entry{*sources.out_dir, "--out"};
    }
    return build(entries);
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view origin) {
    Entries entries;
    load_text(entries, text, origin);
    return build(entries);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : kPresets) {
        names.emplace_back(p.name);
    }
    return names;
}

std::string preset_text(std::string_view name) {
    for (const auto& p : kPresets) {
        if (p.name == name) {
            return std::string(kDampedOscillator) + std::string(p.body);
        }
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::string config_reference() {
    std::ostringstream out;
    out << "Config keys (file lines 'key = value', '#' comments; --set key=value overrides):\n";
    for (const auto& info : kKeys) {
        out << "  " << info.key;
        out << std::string(info.key.size() < 24 ? 24 - info.key.size() : 1, ' ');
        out << (info.fallback.empty() ? std::string("(required)") : "[" + std::string(info.fallback) + "]");
        out << "  " << info.help << "\n";
    }
    out << "Presets:";
    for (const auto& p : kPresets) {
        out << " " << p.name;
    }
    out << "\n";
    return out.str();
}

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
    case Mode::euler_study: return "euler-study";
    case Mode::parareal_classic: return "parareal-classic";
    case Mode::parareal_semi: break;
    }
    return "parareal-semi";
}

} // namespace pita
