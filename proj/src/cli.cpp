#include "etalab/cli.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "etalab/parallel.hpp"

namespace etalab::cli {

using Json = nlohmann::ordered_json;

OutputFormat parse_format(std::string_view s) {
    if (s == "table") {
        return OutputFormat::table;
    }
    if (s == "csv") {
        return OutputFormat::csv;
    }
    if (s == "json") {
        return OutputFormat::json;
    }
    throw Error(ErrorCode::UsageError, "--format must be table, csv or json, got '" + std::string(s) + "'");
}

std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::table:
            return "table";
        case OutputFormat::csv:
            return "csv";
        case OutputFormat::json:
            return "json";
    }
    return "?";
}

int RunConfig::effective_digits() const { return digits.value_or(command == "verify" ? 30 : 20); }

std::filesystem::path RunConfig::effective_cache_dir() const {
    return cache_dir ? *cache_dir : DerivCache::default_dir();
}

namespace {

std::string join_set(const std::set<int>& s) {
    std::string out;
    for (int v : s) {
        out += (out.empty() ? "" : ",") + std::to_string(v);
    }
    return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> e{{"command", command}, {"target", target}};
    const ExperimentParams& p = params;
    auto opt = [&](const char* k, const auto& v) {
        if (v) {
            e.emplace_back(k, std::to_string(*v));
        }
    };
    if (p.a) {
        e.emplace_back("a", p.a->str());
    }
    if (p.set) {
        e.emplace_back("set", *p.set);
    }
    opt("N", p.N);
    opt("l", p.l);
    opt("m", p.m);
    opt("n", p.n);
    if (p.variant) {
        e.emplace_back("variant", *p.variant);
    }
    if (p.perm) {
        e.emplace_back("perm", std::to_string(p.perm->first) + "," + std::to_string(p.perm->second));
    }
    if (!p.drop_d.empty()) {
        e.emplace_back("drop-d", join_set(p.drop_d));
    }
    if (!p.drop_f.empty()) {
        e.emplace_back("drop-f", join_set(p.drop_f));
    }
    if (p.eps) {
        e.emplace_back("eps", p.eps->str());
    }
    opt("max-degree", p.max_degree);
    if (command == "eval") {
        e.emplace_back("K", std::to_string(K));
        e.emplace_back("function", std::string(etalab::to_string(function)));
    }
    e.emplace_back("digits", std::to_string(effective_digits()));
    if (command == "verify") {
        e.emplace_back("seed", std::to_string(seed));
    }
    e.emplace_back("format", std::string(to_string(format)));
    return e;
}

// ---------------------------------------------------------- formatting

std::string certified_decimal(const Float& part, const Mag& rad, int cap) {
    mpfr_srcptr x = part.get();
    if (mpfr_zero_p(x)) {
        return "0";
    }
    int digits = cap;
    if (!rad.is_zero()) {
        long e = 0;
        const double m = mpfr_get_d_2exp(&e, x, MPFR_RNDN);
        const double bits = std::log2(std::abs(m)) + static_cast<double>(e) - rad.log2();
        if (bits <= 0) {
            return "0";
        }
        digits = std::min(cap, static_cast<int>(std::floor(bits * std::log10(2.0))));
        if (digits < 1) {
            return "0";
        }
    }
    mpfr_exp_t e10 = 0;
    char* s = mpfr_get_str(nullptr, &e10, 10, static_cast<size_t>(digits), x, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    std::string sign;
    if (m[0] == '-') {
        sign = "-";
        m.erase(0, 1);
    }
    std::string out = sign + m.substr(0, 1);
    if (m.size() > 1) {
        out += "." + m.substr(1);
    }
    return out + "e" + std::to_string(static_cast<long>(e10) - 1);
}

std::string certified_string(const Ball& b, int cap) {
    std::string re = certified_decimal(b.mid_re(), b.rad(), cap);
    if (mpfr_zero_p(b.mid_im().get())) {
        return re;
    }
    const std::string im = certified_decimal(b.mid_im(), b.rad(), cap);
    if (im == "0") {
        return re;
    }
    return re + (im[0] == '-' ? "" : "+") + im + "i";
}

namespace {

constexpr int kDeltaShown = 6;

std::string rad_string(const Ball& b) { return b.rad().to_string(3); }

std::string digits_string(double d) {
    if (!std::isfinite(d)) {
        return d > 0 ? "inf" : "-inf";
    }
    std::ostringstream o;
    o << std::fixed << std::setprecision(2) << d;
    return o.str();
}

std::string params_string(const ExperimentResult& r) {
    std::string out;
    for (const auto& [k, v] : r.params) {
        out += (out.empty() ? "" : " ") + k + "=" + v;
    }
    return out;
}

std::string status_of(const ExperimentResult& r) { return r.inconclusive() ? "inconclusive" : "ok"; }

std::string render_rows(const ExperimentResult& r, int cap, const std::string& indent) {
    std::vector<std::array<std::string, 7>> cells{{"label", "value", "rad", "target", "delta", "delta_rad", "note"}};
    for (const auto& row : r.rows) {
        std::array<std::string, 7> c;
        c[0] = row.label;
        if (row.value) {
            c[1] = certified_string(*row.value, cap);
            c[2] = rad_string(*row.value);
        }
        if (row.target) {
            c[3] = certified_string(*row.target, cap);
        }
        if (row.delta) {
            c[4] = certified_string(*row.delta, kDeltaShown);
            c[5] = rad_string(*row.delta);
        }
        c[6] = row.note;
        cells.push_back(std::move(c));
    }
    std::array<std::size_t, 7> w{};
    std::array<bool, 7> used{true};
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t i = 0; i < cells[r].size(); ++i) {
            w[i] = std::max(w[i], cells[r][i].size());
            used[i] = used[i] || (r > 0 && !cells[r][i].empty());
        }
    }
    std::string out;
    for (const auto& c : cells) {
        std::string line = indent;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!used[i]) {
                continue;
            }
            std::string cell = c[i];
            cell.resize(w[i] + 2, ' ');
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + "\n";
    }
    return out;
}

std::string result_header(const ExperimentResult& r, bool timing) {
    std::string h = r.name;
    if (!r.params.empty()) {
        h += "  " + params_string(r);
    }
    if (r.prec == 0) {
        return h;
    }
    h += "  [digits " + digits_string(r.digits) + ", prec " + std::to_string(r.prec) + (r.reached ? "" : ", target not reached");
    if (timing) {
        std::ostringstream o;
        o << std::fixed << std::setprecision(3) << r.seconds;
        h += ", " + o.str() + " s";
    }
    return h + "]";
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

Json ball_json(const std::optional<Ball>& b, int cap) {
    if (!b) {
        return nullptr;
    }
    return Json{{"re", certified_decimal(b->mid_re(), b->rad(), cap)},
                {"im", certified_decimal(b->mid_im(), b->rad(), cap)},
                {"rad", rad_string(*b)}};
}

Json result_json(const ExperimentResult& r, int cap, bool timing) {
    Json params = Json::object();
    for (const auto& [k, v] : r.params) {
        params[k] = v;
    }
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back(Json{{"label", row.label},
                            {"value", ball_json(row.value, cap)},
                            {"target", ball_json(row.target, cap)},
                            {"delta", ball_json(row.delta, kDeltaShown)},
                            {"inconclusive", row.inconclusive()},
                            {"note", row.note}});
    }
    Json j{{"name", r.name},   {"params", params},   {"digits", digits_string(r.digits)}, {"prec", r.prec},
           {"reached", r.reached}, {"status", status_of(r)}, {"rows", rows}};
    if (timing) {
        j["seconds"] = r.seconds;
    }
    return j;
}

}  // namespace

std::string render_table(const Report& r) {
    const int cap = r.config.effective_digits();
    std::string out;
    for (const auto& res : r.results) {
        out += result_header(res, r.config.timing) + "\n" + render_rows(res, cap, "  ");
    }
    if (!r.checks.empty()) {
        int counts[3] = {0, 0, 0};
        for (const auto& c : r.checks) {
            out += "[" + std::string(to_string(c.status)) + "] " + c.id + ": " + c.title + "\n      " + c.detail + "\n";
            ++counts[static_cast<int>(c.status)];
        }
        out += std::to_string(counts[0]) + " passed, " + std::to_string(counts[1]) + " failed, " +
               std::to_string(counts[2]) + " inconclusive\n";
    }
    if (!r.error.empty()) {
        out += "error: " + r.error + "\n";
    }
    if (r.config.timing) {
        std::ostringstream o;
        o << std::fixed << std::setprecision(3) << r.seconds;
        out += "total " + o.str() + " s\n";
    }
    return out;
}

std::string render_csv(const Report& r) {
    const int cap = r.config.effective_digits();
    std::string out =
        "check,status,experiment,params,label,value,value_rad,target,target_rad,delta,delta_rad,inconclusive,note";
    if (r.config.timing) {
        out += ",seconds";
    }
    out += "\n";
    auto emit = [&](const std::string& check, const std::string& status, const ExperimentResult& res) {
        for (const auto& row : res.rows) {
            std::vector<std::string> c{check, status, res.name, params_string(res), row.label};
            for (const auto* b : {&row.value, &row.target}) {
                c.push_back(*b ? certified_string(**b, cap) : "");
                c.push_back(*b ? rad_string(**b) : "");
            }
            c.push_back(row.delta ? certified_string(*row.delta, kDeltaShown) : "");
            c.push_back(row.delta ? rad_string(*row.delta) : "");
            c.push_back(row.inconclusive() ? "1" : "0");
            c.push_back(row.note);
            if (r.config.timing) {
                c.push_back(std::to_string(res.seconds));
            }
            std::string line;
            for (std::size_t i = 0; i < c.size(); ++i) {
                line += (i ? "," : "") + csv_cell(c[i]);
            }
            out += line + "\n";
        }
    };
    for (const auto& res : r.results) {
        emit("", status_of(res), res);
    }
    for (const auto& c : r.checks) {
        for (const auto& res : c.results) {
            emit(c.id, std::string(to_string(c.status)), res);
        }
    }
    return out;
}

std::string render_json(const Report& r) {
    const int cap = r.config.effective_digits();
    Json config = Json::object();
    for (const auto& [k, v] : r.config.echo()) {
        config[k] = v;
    }
    Json results = Json::array();
    for (const auto& res : r.results) {
        results.push_back(result_json(res, cap, r.config.timing));
    }
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json rs = Json::array();
        for (const auto& res : c.results) {
            rs.push_back(result_json(res, cap, r.config.timing));
        }
        checks.push_back(Json{{"id", c.id},
                              {"title", c.title},
                              {"status", std::string(to_string(c.status))},
                              {"detail", c.detail},
                              {"results", rs}});
    }
    Json env{{"library", kLibraryVersion},
             {"mpfr", mpfr_get_version()},
             {"gmp", gmp_version},
             {"max_prec_bits", AccuracyTarget(r.config.effective_digits()).max_prec_bits}};
    Json j{{"schema", "etalab-report"}, {"schema_version", kSchemaVersion}, {"config", config},
           {"environment", env},      {"results", results},                {"checks", checks},
           {"exit_code", r.exit_code}};
    if (!r.error.empty()) {
        j["error"] = r.error;
    }
    if (r.config.timing) {
        j["seconds"] = r.seconds;
    }
    return j.dump(2) + "\n";
}

std::string render(const Report& r, OutputFormat f) {
    switch (f) {
        case OutputFormat::table:
            return render_table(r);
        case OutputFormat::csv:
            return render_csv(r);
        case OutputFormat::json:
            return render_json(r);
    }
    return {};
}

// ----------------------------------------------------------------- run

namespace {

int exit_for(ErrorCode c) {
    if (c == ErrorCode::UsageError || c == ErrorCode::InvalidArgument || c == ErrorCode::NotCoprime) {
        return ExitCode::usage;
    }
    if (c == ErrorCode::AccuracyUnreachable || is_precision_limited(c)) {
        return ExitCode::inconclusive;
    }
    return ExitCode::failure;
}

ExperimentResult run_eval(const RunConfig& c, DerivProvider& provider) {
    if (!c.params.a) {
        throw Error(ErrorCode::UsageError, "missing required flag --a");
    }
    if (c.K < 0) {
        throw Error(ErrorCode::UsageError, "--K must be non-negative");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const int digits = c.effective_digits();
    const AccuracyTarget target(digits);
    const Ball a = c.params.a->to_ball(2 * target.start_prec() + 64);
    const auto v = provider.get(a, c.K, digits);
    ExperimentResult r;
    r.name = "eval";
    r.params = {{"a", c.params.a->str()},
                {"function", std::string(etalab::to_string(c.function))},
                {"K", std::to_string(c.K)},
                {"method", std::string(etalab::to_string(v->method()))}};
    const char* f = c.function == Function::eta ? "eta" : "zeta";
    for (int k = 0; k <= c.K; ++k) {
        r.rows.push_back({std::string(f) + "^(" + std::to_string(k) + ")", v->at(k), std::nullopt, std::nullopt, {}});
    }
    r.digits = v->min_accuracy_digits();
    r.prec = v->at(0).prec();
    r.reached = r.digits >= digits;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

ExperimentResult run_cache(const RunConfig& c) {
    DerivCache cache(c.effective_cache_dir());
    ExperimentResult r;
    r.name = "cache " + c.target;
    r.params = {{"dir", cache.dir().string()}};
    r.reached = true;
    if (c.target == "clear") {
        const std::size_t n = cache.clear();
        r.rows.push_back({"removed", std::nullopt, std::nullopt, std::nullopt, std::to_string(n) + " entries"});
    } else if (c.target == "info") {
        std::uintmax_t total = 0;
        auto entries = cache.list();
        std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
        for (const auto& e : entries) {
            r.rows.push_back({e.name, std::nullopt, std::nullopt, std::nullopt, std::to_string(e.bytes) + " bytes"});
            total += e.bytes;
        }
        r.rows.push_back({"total", std::nullopt, std::nullopt, std::nullopt,
                          std::to_string(entries.size()) + " entries, " + std::to_string(total) + " bytes"});
    } else {
        throw Error(ErrorCode::UsageError, "cache action must be info or clear, got '" + c.target + "'");
    }
    return r;
}

}  // namespace

Report run(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.config = config;
    try {
        set_jobs(std::max(1u, config.jobs));
        if (config.command == "cache") {
            rep.results.push_back(run_cache(config));
        } else {
            std::optional<std::filesystem::path> dir;
            if (config.use_cache) {
                dir = config.effective_cache_dir();
            }
            DerivProvider provider(config.function, dir);
            const Session s{&provider, AccuracyTarget(config.effective_digits()), std::nullopt};
            if (config.command == "eval") {
                rep.results.push_back(run_eval(config, provider));
            } else if (config.command == "experiment") {
                rep.results.push_back(run_experiment(config.target, config.params, s));
                if (rep.results.back().inconclusive()) {
                    rep.exit_code = ExitCode::inconclusive;
                }
            } else if (config.command == "verify") {
                if (config.function != Function::eta) {
                    throw Error(ErrorCode::UsageError, "--function must be eta for verification suites");
                }
                rep.checks = run_suite(config.target, s);
                CheckStatus worst = CheckStatus::pass;
                for (const auto& c : rep.checks) {
                    worst = combine(worst, c.status);
                }
                rep.exit_code = worst == CheckStatus::fail           ? ExitCode::failure
                                : worst == CheckStatus::inconclusive ? ExitCode::inconclusive
                                                                     : ExitCode::ok;
            } else {
                throw Error(ErrorCode::UsageError, "unknown command '" + config.command + "'");
            }
        }
    } catch (const Error& e) {
        rep.exit_code = exit_for(e.code());
        rep.error = e.what();
    } catch (const std::exception& e) {
        rep.exit_code = ExitCode::failure;
        rep.error = e.what();
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ------------------------------------------------------------- parsing

namespace {

ComplexLiteral complex_flag(const std::string& v, const char* flag) {
    try {
        return ComplexLiteral::parse(v);
    } catch (const Error& e) {
        std::string what = e.what();
        what.erase(0, what.find(": ") + 2);
        throw Error(ErrorCode::UsageError, std::string("--") + flag + ": " + what);
    }
}

std::set<int> int_set_flag(const std::string& v, const char* flag) {
    std::set<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int x = std::stoi(item, &used);
            if (used != item.size() || x < 0) {
                throw std::invalid_argument(item);
            }
            out.insert(x);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::UsageError, std::string("--") + flag + ": expected non-negative integers, got '" + v + "'");
        }
    }
    return out;
}

std::pair<int, int> perm_flag(const std::string& v) {
    const auto comma = v.find(',');
    try {
        if (comma == std::string::npos) {
            throw std::invalid_argument(v);
        }
        std::size_t u1 = 0;
        std::size_t u2 = 0;
        const std::string a = v.substr(0, comma);
        const std::string b = v.substr(comma + 1);
        const int q = std::stoi(a, &u1);
        const int r = std::stoi(b, &u2);
        if (u1 != a.size() || u2 != b.size() || q < 1) {
            throw std::invalid_argument(v);
        }
        return {q, r};
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::UsageError, "--perm: expected q,r, got '" + v + "'");
    }
}

}  // namespace


namespace {

struct HelpShown : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "--flag: message" without the code prefix of the wrapped error.
Error flag_error(const char* flag, const Error& e) {
    std::string what = e.what();
    const std::string prefix = std::string(etalab::to_string(e.code())) + ": ";
    if (what.rfind(prefix, 0) == 0) {
        what.erase(0, prefix.size());
    }
    return Error(ErrorCode::UsageError, std::string("--") + flag + ": " + what);
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
    CLI::App app{"Certified eta derivatives and determinant experiments", "etalab"};
    app.require_subcommand(1, 1);

    std::string target, a, set, variant, perm, drop_d, drop_f, eps, function = "eta", format = "table";
    std::string out, cache_dir;
    std::optional<int> N, l, m, n, max_degree, digits;
    int K = 10;
    unsigned jobs = 1;
    std::uint64_t seed = 2024;
    bool timing = false;
    bool no_cache = false;

    auto common = [&](CLI::App* sc) {
        sc->add_option("--a", a, "sample point RE+IMi");
        sc->add_option("--set", set, "point set descriptor, e.g. grid:a;d1;d2;N1;N2");
        sc->add_option("--N", N, "matrix size");
        sc->add_option("--l", l, "derivative shift");
        sc->add_option("--m", m, "row, point or anti-diagonal index");
        sc->add_option("--n", n, "column, ratio or degree index");
        sc->add_option("--variant", variant, "S_N variant: plain, fact, antifact, taylor, minor");
        sc->add_option("--perm", perm, "diagonal permutation q,r");
        sc->add_option("--drop-d", drop_d, "column orders left out, e.g. 1,2");
        sc->add_option("--drop-f", drop_f, "row orders left out, e.g. 1");
        sc->add_option("--eps", eps, "progression step of the limit experiment");
        sc->add_option("--max-degree", max_degree, "highest polynomial degree reported");
        sc->add_option("--K", K, "highest derivative order (eval)");
        sc->add_option("--function", function, "eta or zeta");
        sc->add_option("--digits", digits, "certified decimal digits (default 30 for verify, 20 otherwise)");
        sc->add_option("--jobs", jobs, "worker threads");
        sc->add_option("--format", format, "table, csv or json");
        sc->add_option("--out", out, "write the report to FILE");
        sc->add_option("--seed", seed, "seed of the randomized checks (verify)");
        sc->add_option("--cache-dir", cache_dir, "derivative cache directory (default $ETALAB_CACHE_DIR)");
        sc->add_flag("--no-cache", no_cache, "neither read nor write the derivative cache");
        sc->add_flag("--timing", timing, "report wall times (output is then not reproducible)");
    };
    CLI::App* ev = app.add_subcommand("eval", "derivatives eta^(k)(a), k = 0..K");
    CLI::App* ex = app.add_subcommand("experiment", "run one experiment by name");
    ex->add_option("name", target, "experiment name")->required();
    CLI::App* ve = app.add_subcommand("verify", "run a verification suite");
    ve->add_option("suite", target, "paper, engine or trends")->required();
    CLI::App* ca = app.add_subcommand("cache", "inspect or clear the derivative cache");
    ca->add_option("action", target, "info or clear")->required();
    for (CLI::App* sc : {ev, ex, ve, ca}) {
        common(sc);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        throw HelpShown(sub->help());
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorCode::UsageError, e.what());
    }

    RunConfig c;
    c.command = app.get_subcommands().front()->get_name();
    c.target = target;
    ExperimentParams& p = c.params;
    if (!a.empty()) {
        p.a = complex_flag(a, "a");
    }
    if (!set.empty()) {
        try {
            (void)PointSet::parse(set, 64);
        } catch (const Error& e) {
            throw flag_error("set", e);
        }
        p.set = set;
    }
    p.N = N;
    p.l = l;
    p.m = m;
    p.n = n;
    if (!variant.empty()) {
        try {
            (void)parse_sn_variant(variant);
        } catch (const Error& e) {
            throw flag_error("variant", e);
        }
        p.variant = variant;
    }
    if (!perm.empty()) {
        p.perm = perm_flag(perm);
    }
    p.drop_d = int_set_flag(drop_d, "drop-d");
    p.drop_f = int_set_flag(drop_f, "drop-f");
    if (!eps.empty()) {
        p.eps = complex_flag(eps, "eps");
    }
    p.max_degree = max_degree;
    c.K = K;
    try {
        c.function = parse_function(function);
    } catch (const Error& e) {
        throw flag_error("function", e);
    }
    if (digits && *digits < 1) {
        throw Error(ErrorCode::UsageError, "--digits must be positive");
    }
    c.digits = digits;
    if (!cache_dir.empty()) {
        c.cache_dir = cache_dir;
    }
    c.use_cache = !no_cache;
    c.format = parse_format(format);
    c.seed = seed;
    if (jobs < 1) {
        throw Error(ErrorCode::UsageError, "--jobs must be at least 1");
    }
    c.jobs = jobs;
    c.timing = timing;
    if (!out.empty()) {
        c.out = out;
    }
    return c;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_args(argc, argv);
    } catch (const HelpShown& h) {
        out << h.what();
        return ExitCode::ok;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return ExitCode::usage;
    }
    const Report rep = run(config);
    const std::string text = render(rep, config.format);
    if (config.out) {
        const std::filesystem::path tmp = config.out->string() + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f << text;
            if (!f) {
                err << "IoError: cannot write " << tmp.string() << "\n";
                return ExitCode::failure;
            }
        }
        std::error_code ec;
        std::filesystem::rename(tmp, *config.out, ec);
        if (ec) {
            err << "IoError: cannot write " << config.out->string() << ": " << ec.message() << "\n";
            return ExitCode::failure;
        }
    } else {
        out << text;
    }
    if (!rep.error.empty() && config.format != OutputFormat::table) {
        err << rep.error << "\n";
    }
    return rep.exit_code;
}

}  // namespace etalab::cli
