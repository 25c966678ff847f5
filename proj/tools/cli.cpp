#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "formslab/asym_fit.hpp"
#include "formslab/divisor.hpp"
#include "formslab/errors.hpp"
#include "formslab/lattice_count.hpp"
#include "formslab/metric_twist.hpp"
#include "formslab/parallel.hpp"
#include "formslab/random.hpp"
#include "formslab/singularity.hpp"
#include "formslab/volume_lab.hpp"

namespace formslab::cli {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- config

struct Key {
    std::string name;
    std::optional<std::string> fallback;  // nullopt: required
    std::string help;
};

class Config {
public:
    Config(std::string command, const std::vector<Key>& keys) : command_(std::move(command)) {
        for (const auto& k : keys) {
            order_.push_back(k.name);
            if (k.fallback) values_[k.name] = *k.fallback;
        }
    }

    const std::string& command() const { return command_; }
    bool has_key(const std::string& k) const { return std::find(order_.begin(), order_.end(), k) != order_.end(); }

    void set(const std::string& k, const std::string& v, const std::string& origin) {
        if (!has_key(k)) throw ConfigError(origin + ": unknown key '" + k + "' for command " + command_);
        values_[k] = v;
    }

    const std::string& str(const std::string& k) const {
        const auto it = values_.find(k);
        if (it == values_.end()) throw ConfigError("missing required key '" + k + "'");
        return it->second;
    }
    bool empty(const std::string& k) const { return str(k).empty(); }

    double real(const std::string& k) const { return to_real(k, str(k)); }

    std::int64_t integer(const std::string& k) const {
        const auto& s = str(k);
        std::int64_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("key '" + k + "': not an integer: " + s);
        return v;
    }

    std::uint64_t seed(const std::string& k) const {
        const auto& s = str(k);
        std::uint64_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("key '" + k + "': not a seed: " + s);
        return v;
    }

    bool flag(const std::string& k) const {
        const auto& s = str(k);
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw ConfigError("key '" + k + "': not a boolean: " + s);
    }

    // "a,b,c" or "geom:lo:hi:count" (geometric, endpoints included).
    std::vector<double> grid(const std::string& k) const {
        const auto& s = str(k);
        std::vector<double> out;
        if (s.rfind("geom:", 0) == 0) {
            const auto parts = split(s.substr(5), ':');
            if (parts.size() != 3) throw ConfigError("key '" + k + "': expected geom:lo:hi:count");
            const double lo = to_real(k, parts[0]);
            const double hi = to_real(k, parts[1]);
            const auto count = static_cast<int>(to_real(k, parts[2]));
            if (!(lo > 0 && hi > 0) || count < 1) throw ConfigError("key '" + k + "': bad geometric grid");
            for (int i = 0; i < count; ++i)
                out.push_back(count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
            return out;
        }
        for (const auto& part : split(s, ',')) out.push_back(to_real(k, part));
        if (out.empty()) throw ConfigError("key '" + k + "': empty list");
        return out;
    }

    std::vector<int> ints(const std::string& k) const {
        std::vector<int> out;
        for (double v : grid(k)) {
            if (v != std::floor(v)) throw ConfigError("key '" + k + "': expected integers");
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    // Resolved key = value pairs in declaration order.
    std::vector<std::pair<std::string, std::string>> resolved() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& k : order_) {
            const auto it = values_.find(k);
            if (it != values_.end()) out.emplace_back(k, it->second);
        }
        return out;
    }

    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream in(s);
        while (std::getline(in, cur, sep)) {
            const auto b = cur.find_first_not_of(" \t");
            const auto e = cur.find_last_not_of(" \t");
            if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
        }
        return out;
    }

private:
    static double to_real(const std::string& k, const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("key '" + k + "': not a number: " + s);
    }

    std::string command_;
    std::vector<std::string> order_;
    std::map<std::string, std::string> values_;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Plain `key = value` files, CSV outputs (their `# @ key = value` lines) and
// JSON outputs (their "config" object) are all accepted.
void load_config_file(const std::string& path, Config& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    auto apply = [&](const std::string& key, const std::string& value) {
        if (key == "command") {
            if (value != cfg.command()) throw ConfigError(path + ": config is for command '" + value + "'");
            return;
        }
        cfg.set(key, value, path);
    };

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw ConfigError(path + ": " + e.what());
        }
        if (doc.contains("command")) apply("command", doc["command"].get<std::string>());
        if (!doc.contains("config") || !doc["config"].is_object()) throw ConfigError(path + ": no config object");
        for (const auto& [k, v] : doc["config"].items()) apply(k, v.is_string() ? v.get<std::string>() : v.dump());
        return;
    }

    const bool embedded = text.find("# @") != std::string::npos;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        std::string body = trim(line);
        if (embedded) {
            if (body.rfind("# @", 0) != 0) continue;
            body = trim(body.substr(3));
        } else if (body.empty() || body[0] == '#') {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
}

// ---------------------------------------------------------------- output

std::string fmt(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

std::string cell_text(const json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_null()) return "";
    return v.dump();
}

struct Outcome {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json extra = json::object();  // command-specific JSON fields
    std::string summary;
    int code = 0;
};

void render(const Config& cfg, const Outcome& res, const std::string& format, std::ostream& os) {
    if (format == "json") {
        json doc;
        doc["command"] = cfg.command();
        json conf = json::object();
        for (const auto& [k, v] : cfg.resolved()) conf[k] = v;
        doc["config"] = conf;
        if (!res.columns.empty()) {
            json rows = json::array();
            for (const auto& r : res.rows) {
                json obj = json::object();
                for (std::size_t i = 0; i < res.columns.size(); ++i) obj[res.columns[i]] = r[i];
                rows.push_back(obj);
            }
            doc["rows"] = rows;
        }
        for (const auto& [k, v] : res.extra.items()) doc[k] = v;
        os << doc.dump(2) << '\n';
        return;
    }
    os << "# forms_lab " << cfg.command() << '\n';
    os << "# @ command = " << cfg.command() << '\n';
    for (const auto& [k, v] : cfg.resolved()) os << "# @ " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < res.columns.size(); ++i) os << (i ? "," : "") << res.columns[i];
    os << '\n';
    for (const auto& r : res.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
        os << '\n';
    }
}

// ---------------------------------------------------------------- helpers

FormSystem system_of(const Config& c) {
    const std::size_t n = c.empty("n") ? 0 : static_cast<std::size_t>(c.integer("n"));
    return parse_system(c.str("form"), n);
}

Domain domain_of(const Config& c, const FormSystem& f) { return domain_from_json(c.str("domain"), f.n()); }

unsigned threads_of(const Config& c) {
    const auto t = c.integer("threads");
    if (t < 1) throw ConfigError("threads must be positive");
    return static_cast<unsigned>(t);
}

McConfig mc_of(const Config& c) {
    return {c.integer("samples"), c.seed("seed"), threads_of(c)};
}

json pair_json(const ExactPolePair& p) { return {{"r", {{"num", p.r.num()}, {"den", p.r.den()}}}, {"m", p.m}}; }

std::string joined(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}

// ---------------------------------------------------------------- commands

Outcome do_count(const Config& c) {
    const auto F = system_of(c);
    const auto K = domain_of(c, F);
    const double alpha = c.real("alpha");
    const bool timing = c.flag("timing");
    Outcome res;
    res.columns = {"T", "alpha", "count", "wall_time_ms"};
    for (double T : c.grid("T")) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto n = count_inequality({F, K, T, alpha, threads_of(c)});
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
        res.rows.push_back({T, alpha, n, timing ? static_cast<std::int64_t>(ms) : std::int64_t{0}});
        res.summary = "count: T=" + fmt(T) + " alpha=" + fmt(alpha) + " count=" + std::to_string(n);
    }
    return res;
}

Outcome do_volume(const Config& c) {
    const auto F = system_of(c);
    const auto K = domain_of(c, F);
    const double alpha = c.real("alpha");
    const std::optional<double> target = c.empty("target_rel_stderr") ? std::nullopt : std::optional(c.real("target_rel_stderr"));
    McConfig mc = mc_of(c);
    Outcome res;
    res.columns = {"T", "alpha", "value", "stderr", "n_samples", "seed"};
    double worst = 0.0;
    const auto grid = c.grid("T");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        McConfig sub = mc;
        sub.seed = grid.size() == 1 ? mc.seed : derive_key(mc.seed, i);
        const auto est = volume_sublevel(F, K, grid[i], alpha, sub);
        res.rows.push_back({grid[i], alpha, est.value, est.std_error, est.n_samples, est.seed});
        worst = std::max(worst, est.value > 0 ? est.std_error / est.value : std::numeric_limits<double>::infinity());
        res.summary = "volume: T=" + fmt(grid[i]) + " value=" + fmt(est.value) + " stderr=" + fmt(est.std_error);
    }
    if (target && worst > *target) {
        res.code = 3;
        res.summary += " [relative stderr " + fmt(worst) + " exceeds target " + fmt(*target) + "]";
    }
    return res;
}

Outcome do_slice(const Config& c) {
    const auto F = system_of(c);
    const auto K = domain_of(c, F);
    const auto v = c.grid("v");
    const double sigma = c.real("sigma");
    McConfig mc = mc_of(c);
    Outcome res;
    res.columns = {"eps", "value", "stderr", "n_samples", "seed"};
    for (double eps : c.grid("eps")) {
        const auto est = slice_volume(F, K, v, sigma, eps, mc);
        res.rows.push_back({eps, est.value, est.std_error, est.n_samples, est.seed});
        res.summary = "slice: eps=" + fmt(eps) + " value=" + fmt(est.value) + " stderr=" + fmt(est.std_error);
    }
    return res;
}

Outcome do_flatness(const Config& c) {
    const auto F = system_of(c);
    const auto K = domain_of(c, F);
    const double eps_max = c.real("eps_max");
    const auto eps_count = c.integer("eps_count");
    const double ratio = c.real("eps_ratio");
    if (!(eps_max > 0) || eps_count < 1 || !(ratio > 0 && ratio < 1)) throw ConfigError("flatness: bad eps grid");
    std::vector<double> eps;
    for (std::int64_t i = 0; i < eps_count; ++i) eps.push_back(eps_max * std::pow(ratio, static_cast<double>(i)));

    const auto prof = flatness_profile(F, K, eps, static_cast<std::size_t>(c.integer("directions")),
                                       static_cast<std::size_t>(c.integer("offsets")), mc_of(c));
    Outcome res;
    res.columns = {"eps", "M", "stderr", "direction", "offset"};
    for (std::size_t i = 0; i < eps.size(); ++i) {
        std::string dir;
        for (std::size_t k = 0; k < prof.argmax_direction[i].size(); ++k) dir += (k ? " " : "") + fmt(prof.argmax_direction[i][k]);
        res.rows.push_back({eps[i], prof.M_values[i].value, prof.M_values[i].std_error, dir, prof.argmax_offset[i]});
    }
    const auto fit = flatness_exponent(prof);
    res.extra["fit"] = {{"q", fit.q},
                        {"half_width", fit.half_width},
                        {"points_used", fit.points_used},
                        {"pointwise_ratio", fit.pointwise_ratio},
                        {"ratio_disagrees", fit.ratio_disagrees}};
    res.summary = "flatness: q=" + fmt(fit.q) + " +/- " + fmt(fit.half_width) + " (pointwise " + fmt(fit.pointwise_ratio) +
                  (fit.ratio_disagrees ? ", disagrees)" : ")");
    return res;
}

std::vector<int> m_candidates(const Config& c, int n) {
    if (!c.empty("m")) return c.ints("m");
    std::vector<int> m;
    for (int i = 1; i <= n; ++i) m.push_back(i);
    return m;
}

json fit_json(const FitResult& fit) {
    return {{"gamma", fit.gamma},
            {"r", fit.pair.r},
            {"m", fit.pair.m},
            {"residual", fit.residual},
            {"window", {fit.T_min, fit.T_max}},
            {"samples_used", fit.samples_used},
            {"pole_in_range", fit.pole_in_range}};
}

std::string fit_summary(const FitResult& fit) {
    return "r=" + fmt(fit.pair.r) + " m=" + std::to_string(fit.pair.m) + " gamma=" + fmt(fit.gamma) +
           " residual=" + fmt(fit.residual) + (fit.pole_in_range ? "" : " [r beyond n/d]");
}

std::vector<GrowthSample> read_samples(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read samples file " + path);
    std::string line;
    std::vector<std::string> header;
    std::vector<GrowthSample> out;
    std::ptrdiff_t iT = -1;
    std::ptrdiff_t iV = -1;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto cells = Config::split(line, ',');
        if (header.empty()) {
            header = cells;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i] == "T") iT = static_cast<std::ptrdiff_t>(i);
                if (cells[i] == "value") iV = static_cast<std::ptrdiff_t>(i);
            }
            if (iT < 0 || iV < 0) throw InputError(path + ": header needs columns T and value");
            continue;
        }
        if (static_cast<std::ptrdiff_t>(cells.size()) <= std::max(iT, iV)) throw InputError(path + ": short row");
        try {
            out.push_back({std::stod(cells[static_cast<std::size_t>(iT)]), std::stod(cells[static_cast<std::size_t>(iV)])});
        } catch (const std::exception&) {
            throw InputError(path + ": non-numeric sample: " + line);
        }
    }
    return out;
}

Outcome do_fit(const Config& c) {
    const auto samples = read_samples(c.str("input"));
    const int n = static_cast<int>(c.integer("n"));
    const auto fit = fit_volume_growth(samples, n, static_cast<int>(c.integer("d")), c.real("alpha"), m_candidates(c, n),
                                       c.real("drop"));
    Outcome res;
    res.columns = {"gamma", "r", "m", "residual", "T_min", "T_max", "samples_used", "pole_in_range"};
    res.rows.push_back({fit.gamma, fit.pair.r, fit.pair.m, fit.residual, fit.T_min, fit.T_max, fit.samples_used, fit.pole_in_range});
    res.extra["fit"] = fit_json(fit);
    res.summary = "fit: " + fit_summary(fit);
    return res;
}

Outcome do_report(const Config& c) {
    const auto F = system_of(c);
    const auto K = domain_of(c, F);
    const double alpha = c.real("alpha");
    const McConfig mc = mc_of(c);
    const auto grid = c.grid("T");
    const int n = static_cast<int>(F.n());

    std::vector<GrowthSample> vols;
    std::vector<std::int64_t> counts;
    std::vector<MCEstimate> ests;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        McConfig sub = mc;
        sub.seed = derive_key(mc.seed, i);
        ests.push_back(volume_sublevel(F, K, grid[i], alpha, sub));
        vols.push_back({grid[i], ests.back().value});
        counts.push_back(count_inequality({F, K, grid[i], alpha, mc.threads}));
    }
    const auto fit = fit_volume_growth(vols, n, static_cast<int>(F.degree()), alpha, m_candidates(c, n), c.real("drop"));

    Outcome res;
    res.columns = {"T", "count", "volume", "stderr", "count_over_volume", "model"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ratio = ests[i].value > 0 ? static_cast<double>(counts[i]) / ests[i].value : std::numeric_limits<double>::infinity();
        res.rows.push_back({grid[i], counts[i], ests[i].value, ests[i].std_error, ratio, growth_model(fit, n, alpha, grid[i])});
    }
    res.extra["fit"] = fit_json(fit);
    if (!c.empty("expect_r")) {
        const double r = c.real("expect_r");
        const int m = static_cast<int>(c.integer("expect_m"));
        res.extra["expected"] = {{"r", r}, {"m", m}, {"r_error", fit.pair.r - r}, {"m_matches", fit.pair.m == m}};
    }
    res.summary = "report: " + fit_summary(fit);
    return res;
}

Outcome do_sb(const Config& c) {
    const bool mono = !c.empty("monomial");
    const bool sos = !c.empty("sum_of_squares");
    if (mono == sos) throw ConfigError("sb: give exactly one of --monomial or --sum-of-squares");
    const auto roots = mono ? sb_monomial(c.ints("monomial")) : sb_sum_of_squares(static_cast<int>(c.integer("sum_of_squares")));
    Outcome res;
    res.columns = {"num", "den", "mult"};
    json arr = json::array();
    std::string text;
    for (const auto& r : roots.roots()) {
        res.rows.push_back({r.root.num(), r.root.den(), r.multiplicity});
        arr.push_back({{"num", r.root.num()}, {"den", r.root.den()}, {"mult", r.multiplicity}});
        text += (text.empty() ? "" : " ") + r.root.str() + (r.multiplicity > 1 ? "(x" + std::to_string(r.multiplicity) + ")" : "");
    }
    res.extra["roots"] = arr;
    res.extra["largest_root_data"] = pair_json(largest_root_data(roots));
    res.summary = "sb: roots " + text;
    return res;
}

Outcome do_lct(const Config& c) {
    const auto k = c.ints("k");
    const auto h = c.empty("h") ? std::vector<int>(k.size(), 0) : c.ints("h");
    const auto& field = c.str("field");
    if (field != "real" && field != "complex") throw ConfigError("lct: field must be real or complex");
    const auto lct = field == "real" ? lct_monomial_real(k, h) : lct_monomial_complex(k, h);
    Outcome res;
    res.columns = {"r_num", "r_den", "m", "infinite"};
    if (const auto* p = std::get_if<ExactPolePair>(&lct)) {
        res.rows.push_back({p->r.num(), p->r.den(), p->m, false});
        res.extra = pair_json(*p);
        res.summary = "lct: r=" + p->r.str() + " m=" + std::to_string(p->m);
    } else {
        res.rows.push_back({nullptr, nullptr, nullptr, true});
        res.extra["infinite"] = true;
        res.summary = "lct: infinite";
    }
    return res;
}

Outcome do_divisor(const Config& c) {
    const int n = static_cast<int>(c.integer("n"));
    Outcome res;
    res.columns = {"t", "delta", "main_term", "difference"};
    for (double t : c.grid("t")) {
        const auto d = divisor_summatory(n, t);
        json main = nullptr;
        json diff = nullptr;
        if ((n == 2 || n == 3) && t > 0) {
            const double m = t * q_poly_eval(n, std::log(t));
            main = m;
            diff = static_cast<double>(d) - m;
        }
        res.rows.push_back({t, d, main, diff});
        res.summary = "divisor: Delta_" + std::to_string(n) + "(" + fmt(t) + ") = " + std::to_string(d);
    }
    return res;
}

Outcome do_bracket(const Config& c) {
    const int n = static_cast<int>(c.integer("n"));
    Outcome res;
    res.columns = {"n", "T", "alpha", "delta_n", "axis_term", "count", "bracket", "upper", "holds"};
    int held = 0;
    int total = 0;
    for (double Td : c.grid("T")) {
        if (Td != std::floor(Td)) throw ConfigError("bracket: T must be an integer");
        const auto T = static_cast<std::int64_t>(Td);
        for (double alpha : c.grid("alpha")) {
            const auto b = counterexample_bracket(n, T, alpha, threads_of(c));
            res.rows.push_back({n, T, alpha, b.delta_n, b.axis_term, b.count, b.bracket, b.upper, b.holds});
            held += b.holds ? 1 : 0;
            ++total;
            res.summary = "bracket: holds=" + std::string(b.holds ? "true" : "false") + " bracket=" + std::to_string(b.bracket) +
                          " upper=" + std::to_string(b.upper);
        }
    }
    if (total > 1) res.summary = "bracket: holds in " + std::to_string(held) + "/" + std::to_string(total) + " cases";
    return res;
}

Outcome do_twist(const Config& c) {
    const auto F = system_of(c);
    const PolePair pair{c.real("r"), static_cast<int>(c.integer("m"))};
    const auto seed = c.seed("seed");
    const double bound = c.real("norm_bound");
    Outcome res;
    const auto& mode = c.str("mode");
    if (mode == "curve") {
        TwistExperiment exp{F, pair, c.grid("eps"), {}, static_cast<std::size_t>(c.integer("matrices")), c.real("kappa"),
                            0.2, seed, bound, threads_of(c)};
        const auto curve = success_curve(exp, c.real("f_exponent"));
        res.columns = {"eps", "successes", "total", "fraction", "wilson_lo", "wilson_hi"};
        for (const auto& p : curve) res.rows.push_back({p.eps, p.successes, p.total, p.fraction, p.interval.lo, p.interval.hi});
        res.summary = "twist curve: fraction " + fmt(curve.back().fraction) + " at eps=" + fmt(curve.back().eps);
    } else if (mode == "count") {
        const auto g = sample_unimodular(F.n(), derive_key(seed, 0), bound);
        const auto rows = twisted_count_series(F, g, c.real("a"), c.real("b"), c.grid("T"), pair, threads_of(c));
        res.columns = {"T", "count", "prediction", "normalized"};
        std::vector<double> norm;
        for (const auto& r : rows) {
            res.rows.push_back({r.T, r.count, r.prediction, r.normalized});
            norm.push_back(r.normalized);
        }
        const std::vector<double> top(norm.end() - static_cast<std::ptrdiff_t>(std::min<std::size_t>(3, norm.size())), norm.end());
        const double spread = relative_spread(top);
        res.extra["spread_top3"] = spread;
        res.summary = "twist count: normalized spread over top T values = " + fmt(spread);
    } else {
        throw ConfigError("twist: mode must be curve or count");
    }
    return res;
}

struct Command {
    std::string name;
    std::string help;
    std::vector<Key> keys;
    std::function<Outcome(const Config&)> body;
};

std::vector<Command> commands() {
    const std::string threads = std::to_string(default_threads());
    const Key form{"form", std::nullopt, "form text, members of a system separated by ';'"};
    const Key nvars{"n", "", "number of variables (default: largest index in the form)"};
    const Key domain{"domain", std::nullopt, R"(domain JSON: {"ball": r} | {"box": [[lo,hi],...]} | {"polytope": [...]})"};
    const Key thr{"threads", threads, "worker threads"};
    auto fmtkey = [](const char* def) { return Key{"format", def, "csv or json"}; };

    return {
        {"count", "exact lattice count of m in T.K with ||F(m)|| <= T^(d-alpha)",
         {form, nvars, domain, {"T", "10", "T grid"}, {"alpha", "1", "alpha"}, thr, {"timing", "true", "record wall_time_ms"}, fmtkey("csv")},
         do_count},
        {"volume", "Monte Carlo sublevel volume",
         {form, nvars, domain, {"T", "10", "T grid"}, {"alpha", "1", "alpha"}, {"samples", "1000000", "samples per T"},
          {"seed", "1", "seed"}, thr, {"target_rel_stderr", "", "exit 3 if stderr/value exceeds this"}, fmtkey("csv")},
         do_volume},
        {"slice", "Monte Carlo hyperplane slice volume",
         {form, nvars, domain, {"v", std::nullopt, "unit normal, comma separated"}, {"sigma", "0", "offset"},
          {"eps", "0.1", "eps grid"}, {"samples", "100000", "samples"}, {"seed", "1", "seed"}, thr, fmtkey("csv")},
         do_slice},
        {"flatness", "flatness profile and exponent",
         {form, nvars, domain, {"eps_max", "0.25", "largest eps"}, {"eps_count", "8", "grid points"}, {"eps_ratio", "0.5", "grid ratio"},
          {"directions", "16", "random directions"}, {"offsets", "9", "offsets per direction"}, {"samples", "20000", "samples per slice"},
          {"seed", "1", "seed"}, thr, fmtkey("csv")},
         do_flatness},
        {"fit", "fit the growth law to (T, value) samples",
         {{"input", std::nullopt, "CSV with T and value columns"}, {"n", std::nullopt, "dimension"}, {"d", std::nullopt, "degree"},
          {"alpha", "1", "alpha"}, {"m", "", "m candidates (default 1..n)"}, {"drop", "0.2", "fraction of smallest T dropped"},
          fmtkey("json")},
         do_fit},
        {"report", "counts, volumes and fitted growth law over a T grid",
         {form, nvars, domain, {"alpha", "1", "alpha"}, {"T", "geom:16:1024:7", "T grid"}, {"samples", "200000", "samples per T"},
          {"seed", "1", "seed"}, thr, {"m", "", "m candidates"}, {"drop", "0.2", "fraction of smallest T dropped"},
          {"expect_r", "", "expected r"}, {"expect_m", "1", "expected m"}, fmtkey("csv")},
         do_report},
        {"sb", "Sato-Bernstein roots of a monomial or a sum of squares",
         {{"monomial", "", "exponent vector k"}, {"sum_of_squares", "", "number of squares"}, fmtkey("json")},
         do_sb},
        {"lct", "log-canonical threshold of a monomial",
         {{"k", std::nullopt, "exponents"}, {"h", "", "weights (default 0)"}, {"field", "complex", "real or complex"}, fmtkey("json")},
         do_lct},
        {"divisor", "Piltz divisor summatory function",
         {{"n", "2", "number of factors"}, {"t", "1000", "t grid"}, fmtkey("csv")},
         do_divisor},
        {"bracket", "divisor counterexample bracket",
         {{"n", "2", "dimension"}, {"T", "10", "integer T grid"}, {"alpha", "1", "alpha grid"}, thr, fmtkey("csv")},
         do_bracket},
        {"twist", "random unimodular twists: success curve or band counts",
         {form, nvars, {"mode", "curve", "curve or count"}, {"r", "1", "pole r"}, {"m", "1", "pole m"},
          {"f_exponent", "1.2", "f(x) = x^f_exponent"}, {"kappa", "10", "search constant"}, {"matrices", "200", "matrices"},
          {"norm_bound", "10", "operator norm bound"}, {"seed", "42", "seed"}, {"eps", "0.9,0.5,0.25,0.1,0.05,0.02,0.01", "eps schedule"},
          {"a", "0", "band lower end"}, {"b", "1", "band upper end"}, {"T", "20,40,80,160", "T grid"}, thr, fmtkey("csv")},
         do_twist},
    };
}

std::string flag_name(const std::string& key) {
    std::string f = key;
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"forms_lab: lattice counts, sublevel volumes and singularity data for homogeneous forms"};
    app.require_subcommand(1);
    const auto cmds = commands();

    struct Bound {
        CLI::App* sub;
        std::map<std::string, std::string> flags;
        std::map<std::string, CLI::Option*> opts;
        std::string config;
        std::string output = "-";
    };
    std::vector<Bound> bound(cmds.size());
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        auto& b = bound[i];
        b.sub = app.add_subcommand(cmds[i].name, cmds[i].help);
        b.sub->set_help_flag("--help", "print this help message and exit");
        for (const auto& k : cmds[i].keys) {
            std::string help = k.help;
            if (k.fallback && !k.fallback->empty()) help += " [" + *k.fallback + "]";
            if (!k.fallback) help += " (required)";
            b.opts[k.name] = b.sub->add_option(flag_name(k.name), b.flags[k.name], help);
        }
        b.sub->add_option("--config", b.config, "key = value file, or an earlier output to replay");
        b.sub->add_option("-o,--output", b.output, "output path ('-' for stdout)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    std::size_t idx = 0;
    while (!bound[idx].sub->parsed()) ++idx;
    const Command& cmd = cmds[idx];
    const Bound& b = bound[idx];

    try {
        Config cfg(cmd.name, cmd.keys);
        if (!b.config.empty()) load_config_file(b.config, cfg);
        if (const char* env = std::getenv("FORMS_LAB_SEED"); env && cfg.has_key("seed")) cfg.set("seed", env, "FORMS_LAB_SEED");
        for (const auto& [name, opt] : b.opts)
            if (opt->count() > 0) cfg.set(name, b.flags.at(name), "flag");
        const auto& format = cfg.str("format");
        if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");

        const Outcome res = cmd.body(cfg);
        if (b.output == "-") {
            render(cfg, res, format, out);
        } else {
            std::ofstream file(b.output, std::ios::binary);
            if (!file) throw ConfigError("cannot write " + b.output);
            render(cfg, res, format, file);
        }
        err << res.summary << '\n';
        return res.code;
    } catch (const InputError& e) {
        err << "forms_lab " << cmd.name << ": input error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "forms_lab " << cmd.name << ": configuration error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "forms_lab " << cmd.name << ": numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const InsufficientDataError& e) {
        err << "forms_lab " << cmd.name << ": insufficient data: " << e.what() << '\n';
        return 3;
    } catch (const OverflowError& e) {
        err << "forms_lab " << cmd.name << ": overflow: " << e.what() << '\n';
        return 4;
    } catch (const BudgetError& e) {
        err << "forms_lab " << cmd.name << ": budget exceeded: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace formslab::cli
