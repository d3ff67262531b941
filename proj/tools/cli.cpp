#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "arboreal/certificate_json.hpp"
#include "arboreal/certify.hpp"
#include "arboreal/dynamics.hpp"
#include "arboreal/errors.hpp"

namespace arboreal::cli {

namespace {

using json = nlohmann::ordered_json;

struct Limits {
    std::size_t degree_cap = 4096;
    unsigned n_search_max = 64;
    std::size_t discriminant_cap = 1024;
    std::size_t scan_degree_cap = 256;
    std::size_t max_numerator_bits = 1u << 14;
    FactorBudget budget;
};

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

std::uint64_t parse_positive(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != value.size() || v == 0)
        throw InvalidArgument("limit " + key + " needs a positive integer, got '" + value + "'");
    return v;
}

void set_limit(Limits& l, const std::string& raw_key, const std::string& value) {
    const std::string key = normalize_key(raw_key);
    const std::uint64_t v = parse_positive(key, value);
    if (key == "degree_cap") l.degree_cap = v;
    else if (key == "n_search_max") l.n_search_max = static_cast<unsigned>(v);
    else if (key == "discriminant_cap") l.discriminant_cap = v;
    else if (key == "scan_degree_cap") l.scan_degree_cap = v;
    else if (key == "max_numerator_bits") l.max_numerator_bits = v;
    else if (key == "trial_bound") l.budget.trial_bound = v;
    else if (key == "rho_iterations") l.budget.rho_iterations = v;
    else if (key == "max_rho_bits") l.budget.max_rho_bits = v;
    else throw InvalidArgument("unknown limit '" + raw_key + "'");
}

/// ARBOREAL_LIMITS="degree_cap=2048,n_search_max=32"
Limits limits_from_env() {
    Limits l;
    const char* env = std::getenv("ARBOREAL_LIMITS");
    if (!env) return l;
    std::string s(env);
    std::replace_if(s.begin(), s.end(), [](char ch) { return ch == ',' || ch == ';'; }, ' ');
    std::istringstream in(s);
    std::string item;
    while (in >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidArgument("ARBOREAL_LIMITS: expected key=value, got '" + item + "'");
        set_limit(l, item.substr(0, eq), item.substr(eq + 1));
    }
    return l;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// key=value lines fill in flags the command line did not give.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read config file " + path);
    std::string line;
    unsigned lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "command") {
            if (args.empty() || args.front().rfind("-", 0) == 0) args.insert(args.begin(), value);
            continue;
        }
        const std::string flag = "--" + key;
        if (has_flag(args, flag)) continue;
        if (key == "plus") {
            if (value == "true" || value == "1") args.push_back(flag);
            continue;
        }
        args.push_back(flag + "=" + value);
    }
    return args;
}

struct RunConfig {
    std::string poly;
    unsigned degree = 0;  // --unicritical
    std::string c;
    bool plus = false;
    std::string alpha;
    unsigned N = 1;
    unsigned N_max = 0;
    std::uint64_t p_max = 0;
    std::uint64_t seed = kDefaultSeed;
    std::string format = "json";
    std::string verify_file;
    Limits limits;
};

Rational unicritical_c(const RunConfig& cfg) {
    if (cfg.c.empty()) throw InvalidArgument("--unicritical needs --c");
    const Rational v = Rational::parse(cfg.c);
    return cfg.plus ? -v : v;
}

PolyQ target_poly(const RunConfig& cfg) {
    if (!cfg.poly.empty() && cfg.degree) throw InvalidArgument("give --poly or --unicritical, not both");
    if (!cfg.poly.empty()) return PolyQ::parse(cfg.poly);
    if (cfg.degree) return unicritical(cfg.degree, unicritical_c(cfg));
    throw InvalidArgument("a polynomial is required: --poly [a0,a1,...] or --unicritical d --c c");
}

/// (d, c) with f = x^d - c.
std::pair<unsigned, Rational> unicritical_params(const RunConfig& cfg) {
    if (cfg.degree) {
        if (!cfg.poly.empty()) throw InvalidArgument("give --poly or --unicritical, not both");
        return {cfg.degree, unicritical_c(cfg)};
    }
    const PolyQ f = target_poly(cfg);
    const auto& a = f.coefficients();
    const bool shape = f.degree() >= 2 && f.is_monic() &&
                       std::all_of(a.begin() + 1, a.end() - 1, [](const Rational& x) { return x.is_zero(); });
    if (!shape) throw InvalidArgument("certify needs f = x^d - c, got " + f.str());
    return {static_cast<unsigned>(f.degree()), -a[0]};
}

Rational alpha_of(const RunConfig& cfg) {
    if (cfg.alpha.empty()) throw InvalidArgument("--alpha is required");
    return Rational::parse(cfg.alpha);
}

json strings(const std::vector<Integer>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(x.get_str());
    return out;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

using Summary = std::vector<std::pair<std::string, std::string>>;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

void write_csv(std::ostream& out, const Table& t) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
        out << "\n";
    };
    line(t.columns);
    for (const auto& r : t.rows) line(r);
}

void write_human(std::ostream& out, const Summary& summary, const Table& t) {
    for (const auto& [k, v] : summary) out << k << ": " << v << "\n";
    if (t.columns.empty()) return;
    std::vector<std::size_t> w(t.columns.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = t.columns[i].size();
    for (const auto& r : t.rows)
        for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    out << "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << (i ? "  " : "") << std::setw(static_cast<int>(w[i])) << cells[i];
        out << "\n";
    };
    line(t.columns);
    for (const auto& r : t.rows) line(r);
}

void emit(const RunConfig& cfg, std::ostream& out, const json& report, const Summary& summary, const Table& table) {
    if (cfg.format == "csv") write_csv(out, table);
    else if (cfg.format == "human") write_human(out, summary, table);
    else out << report.dump(2) << "\n";
}

std::string opt_str(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : "-"; }

std::string fixed(double v, int digits = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

void cmd_pcf(const RunConfig& cfg, std::ostream& out) {
    const PolyQ f = target_poly(cfg);
    json r;
    r["polynomial"] = f.str();
    Summary summary{{"polynomial", f.str()}};
    Table table{{"critical_point", "n", "value", "note"}, {}};
    try {
        const auto orbits = critical_orbits(f);
        const bool pcf = std::all_of(orbits.begin(), orbits.end(),
                                     [](const CriticalOrbit& o) { return o.kind == OrbitKind::periodic; });
        r["verdict"] = pcf ? "pcf" : "post-critically infinite";
        json list = json::array();
        for (const auto& o : orbits) {
            json j;
            j["critical_point"] = o.critical_point.str();
            json values = json::array();
            for (const auto& v : o.orbit_values) values.push_back(v.str());
            if (o.kind == OrbitKind::periodic) {
                j["kind"] = "periodic";
                j["tail"] = o.tail;
                j["cycle"] = o.cycle;
            } else {
                j["kind"] = "escaped";
                j["escape_step"] = o.escape_step;
                if (o.witness == EscapeWitness::archimedean) {
                    j["witness"] = "archimedean";
                    j["bound"] = o.bound.str();
                } else {
                    j["witness"] = "p-adic";
                    j["witness_prime"] = o.witness_prime.get_str();
                }
            }
            j["orbit"] = std::move(values);
            list.push_back(std::move(j));
            for (std::size_t n = 0; n < o.orbit_values.size(); ++n) {
                std::string note;
                if (n + 1 == o.orbit_values.size()) {
                    if (o.kind == OrbitKind::periodic) note = "repeats n=" + std::to_string(o.tail);
                    else if (o.witness == EscapeWitness::archimedean) note = "|z| > " + o.bound.str();
                    else note = "escapes " + o.witness_prime.get_str() + "-adically";
                }
                table.rows.push_back({o.critical_point.str(), std::to_string(n), o.orbit_values[n].str(), note});
            }
            summary.emplace_back("orbit of " + o.critical_point.str(),
                                 o.kind == OrbitKind::periodic
                                     ? "tail " + std::to_string(o.tail) + ", cycle " + std::to_string(o.cycle)
                                     : "escapes at step " + std::to_string(o.escape_step));
        }
        r["critical_orbits"] = std::move(list);
    } catch (const UnsupportedError& e) {
        r["verdict"] = "unsupported";
        r["reason"] = e.what();
        r["critical_orbits"] = json::array();
    }
    summary.insert(summary.begin() + 1, {"verdict", r["verdict"].get<std::string>()});
    if (r.contains("reason")) summary.emplace_back("reason", r["reason"].get<std::string>());
    emit(cfg, out, r, summary, table);
}

void cmd_verify(const RunConfig& cfg, std::ostream& out) {
    std::ifstream in(cfg.verify_file, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read certificate " + cfg.verify_file);
    std::ostringstream text;
    text << in.rdbuf();
    const CertificateCheck check = verify_certificate_json(text.str());
    json r;
    r["file"] = cfg.verify_file;
    r["verified"] = true;
    r["byte_identical"] = check.byte_identical;
    Summary summary{{"file", cfg.verify_file}, {"verified", "yes"},
                    {"byte_identical", check.byte_identical ? "yes" : "no"}};
    Table table{{"file", "verified", "byte_identical"},
                {{cfg.verify_file, "true", check.byte_identical ? "true" : "false"}}};
    emit(cfg, out, r, summary, table);
}

void cmd_certify(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.verify_file.empty()) return cmd_verify(cfg, out);
    const auto [d, c] = unicritical_params(cfg);
    CertifyOptions opt;
    opt.N_max = cfg.N_max ? cfg.N_max : 12;
    opt.degree_cap = cfg.limits.degree_cap;
    opt.seed = cfg.seed;
    opt.search.n_search_max = cfg.limits.n_search_max;
    opt.search.max_numerator_bits = cfg.limits.max_numerator_bits;
    opt.search.budget = cfg.limits.budget;
    const LowerBoundCertificate cert = certify_unicritical(d, c, alpha_of(cfg), opt);
    if (cfg.format == "json") {
        out << certificate_to_json(cert);
        return;
    }
    Summary summary{{"f", unicritical(d, c).str()}, {"alpha", cert.alpha.str()}};
    if (cert.shifted) summary.emplace_back("shift", "alpha = -c: rows certify alpha' = 0 at N' = N - 1");
    for (const auto& p : cert.primes)
        summary.emplace_back("prime", "p = " + std::to_string(p.p) + ", n0 = " + std::to_string(p.n0) +
                                          ", found at n = " + std::to_string(p.found_at_n));
    summary.emplace_back("claim", cert.claim.statement);
    if (cert.truncated_at) summary.emplace_back("truncated", "rows end at N = " + std::to_string(*cert.truncated_at));
    Table table{{"p", "N", "e_N", "m_N", "ru_check", "bound", "order_bound"}, {}};
    for (const auto& r : cert.rows)
        table.rows.push_back({std::to_string(r.p), std::to_string(r.N), std::to_string(r.e_N), std::to_string(r.m_N),
                              r.ru_check ? "true" : "false", std::to_string(r.bound), r.order_bound.get_str()});
    emit(cfg, out, json(), summary, table);
}

std::vector<Integer> orbit_support(const PolyQ& f, const Rational& alpha, const Limits& limits) {
    SupportLimits sl;
    sl.discriminant_cap = 1;
    sl.budget = limits.budget;
    return support_set(f, alpha, 1, sl).primes;
}

void cmd_scan(const RunConfig& cfg, std::ostream& out) {
    const PolyQ f = target_poly(cfg);
    const Rational alpha = alpha_of(cfg);
    const std::uint64_t p_max = cfg.p_max ? cfg.p_max : 1000;
    const std::vector<Integer> S = orbit_support(f, alpha, cfg.limits);
    const SplitScanReport rep = split_scan(f, alpha, cfg.N, p_max, S, cfg.limits.degree_cap);
    json r;
    r["polynomial"] = f.str();
    r["alpha"] = alpha.str();
    r["N"] = rep.N;
    r["degree"] = rep.degree;
    r["p_max"] = rep.p_max;
    r["S"] = strings(S);
    r["primes_scanned"] = rep.primes_scanned;
    r["split_count"] = rep.split_primes.size();
    r["least_split_prime"] = rep.least ? json(*rep.least) : json(nullptr);
    r["split_primes"] = rep.split_primes;
    Summary summary{{"polynomial", f.str()},
                    {"alpha", alpha.str()},
                    {"N", std::to_string(rep.N)},
                    {"primes scanned", std::to_string(rep.primes_scanned)},
                    {"completely split", std::to_string(rep.split_primes.size())},
                    {"least split prime", opt_str(rep.least)}};
    Table table{{"p"}, {}};
    for (auto p : rep.split_primes) table.rows.push_back({std::to_string(p)});
    emit(cfg, out, r, summary, table);
}

void cmd_support(const RunConfig& cfg, std::ostream& out) {
    const PolyQ f = target_poly(cfg);
    const Rational alpha = alpha_of(cfg);
    SupportLimits sl;
    sl.discriminant_cap = cfg.limits.discriminant_cap;
    sl.budget = cfg.limits.budget;
    const SupportSet s = support_set(f, alpha, cfg.N_max ? cfg.N_max : 8, sl);
    json r;
    r["polynomial"] = f.str();
    r["alpha"] = alpha.str();
    r["S"] = strings(s.primes);
    json prov = json::object();
    for (const auto& [p, why] : s.provenance) prov[p.get_str()] = why;
    r["provenance"] = std::move(prov);
    json route = json::array();
    Table table{{"N", "disc_numerator_primes"}, {}};
    for (std::size_t i = 0; i < s.computed_N.size(); ++i) {
        route.push_back({{"N", s.computed_N[i]}, {"primes", strings(s.numerator_support[i])}});
        std::string cell;
        for (const auto& p : s.numerator_support[i]) cell += (cell.empty() ? "" : " ") + p.get_str();
        table.rows.push_back({std::to_string(s.computed_N[i]), cell});
    }
    r["resultant_route"] = std::move(route);
    r["resultant_primes"] = strings(s.resultant_primes);
    r["stabilized_at"] = s.stabilized_at;
    r["resultant_within_orbit"] = s.resultant_within_orbit;
    r["truncated"] = s.truncated;
    std::string S_text;
    for (const auto& p : s.primes) S_text += (S_text.empty() ? "" : " ") + p.get_str();
    Summary summary{{"polynomial", f.str()},
                    {"alpha", alpha.str()},
                    {"S (orbit route)", S_text.empty() ? "-" : S_text},
                    {"stabilized at N", std::to_string(s.stabilized_at)},
                    {"within orbit route", s.resultant_within_orbit ? "yes" : "no"},
                    {"truncated", s.truncated ? "yes" : "no"}};
    emit(cfg, out, r, summary, table);
}

void cmd_grh(const RunConfig& cfg, std::ostream& out) {
    const PolyQ f = target_poly(cfg);
    const Rational alpha = alpha_of(cfg);
    GrowthLimits gl;
    gl.scan_degree_cap = cfg.limits.scan_degree_cap;
    gl.discriminant_cap = cfg.limits.discriminant_cap;
    const GrowthReport rep = grh_growth_report(f, alpha, cfg.N_max ? cfg.N_max : 6, cfg.p_max ? cfg.p_max : 10000, gl);
    json r;
    r["label"] = GrowthReport::label;
    r["polynomial"] = f.str();
    r["alpha"] = alpha.str();
    r["S"] = strings(rep.S);
    json rows = json::array();
    Table table{{"N", "least_split_prime", "log_disc", "serre_bound"}, {}};
    for (const auto& g : rep.rows) {
        json j;
        j["N"] = g.N;
        j["scanned"] = g.scanned;
        j["least_split_prime"] = g.least_split_prime ? json(*g.least_split_prime) : json(nullptr);
        j["log_disc"] = g.log_disc ? json(*g.log_disc) : json(nullptr);
        j["serre_bound"] = g.serre_bound ? json(*g.serre_bound) : json(nullptr);
        rows.push_back(std::move(j));
        table.rows.push_back({std::to_string(g.N), g.scanned ? opt_str(g.least_split_prime) : "not scanned",
                              g.log_disc ? fixed(*g.log_disc) : "-", opt_str(g.serre_bound)});
    }
    r["rows"] = std::move(rows);
    Summary summary{{"label", GrowthReport::label}, {"polynomial", f.str()}, {"alpha", alpha.str()}};
    emit(cfg, out, r, summary, table);
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Arboreal Galois degree certificates for iterated polynomials over Q", "arboreal"};
    app.require_subcommand(1);
    RunConfig cfg;
    try {
        cfg.limits = limits_from_env();
        std::vector<std::string> args = expand_config(raw_args);

        auto add_format = [&](CLI::App* s) {
            s->add_option("--format", cfg.format, "json | csv | human")
                ->check(CLI::IsMember({"json", "csv", "human"}))
                ->capture_default_str();
        };
        auto add_poly = [&](CLI::App* s) {
            s->add_option("--poly", cfg.poly, "ascending coefficients, e.g. [-1,0,1] for x^2 - 1");
            s->add_option("--unicritical", cfg.degree, "degree d of x^d - c")->check(CLI::Range(2u, 1u << 20));
            s->add_option("--c", cfg.c, "c in x^d - c");
            s->add_flag("--plus", cfg.plus, "read --c as x^d + c");
        };
        auto add_limit = [&](CLI::App* s, const std::string& name, const std::string& key, std::uint64_t current) {
            s->add_option_function<std::string>(
                  name, [&cfg, key](const std::string& v) { set_limit(cfg.limits, key, v); }, "work limit")
                ->default_str(std::to_string(current));
        };

        CLI::App* pcf = app.add_subcommand("pcf", "critical orbits and the PCF verdict");
        add_poly(pcf);
        add_format(pcf);

        CLI::App* certify = app.add_subcommand("certify", "lower-bound certificate for x^d - c");
        add_poly(certify);
        certify->add_option("--alpha", cfg.alpha, "base point");
        certify->add_option("--N-max", cfg.N_max, "largest N")->check(CLI::PositiveNumber);
        certify->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
        certify->add_option("--verify", cfg.verify_file, "re-check a stored certificate instead");
        add_limit(certify, "--degree-cap", "degree_cap", cfg.limits.degree_cap);
        add_limit(certify, "--n-search-max", "n_search_max", cfg.limits.n_search_max);
        add_format(certify);

        CLI::App* verify = app.add_subcommand("verify", "re-check a stored certificate from scratch");
        verify->add_option("file", cfg.verify_file, "certificate JSON")->required();
        add_format(verify);

        CLI::App* scan = app.add_subcommand("scan", "completely split primes of f^N - alpha");
        add_poly(scan);
        scan->add_option("--alpha", cfg.alpha, "base point");
        scan->add_option("--N", cfg.N, "iterate")->check(CLI::PositiveNumber);
        scan->add_option("--p-max", cfg.p_max, "largest prime scanned (default 1000)")->check(CLI::PositiveNumber);
        add_limit(scan, "--degree-cap", "degree_cap", cfg.limits.degree_cap);
        add_format(scan);

        CLI::App* support = app.add_subcommand("support", "support set S(f, alpha) by both routes");
        add_poly(support);
        support->add_option("--alpha", cfg.alpha, "base point");
        support->add_option("--N-max", cfg.N_max, "largest N on the discriminant route (default 8)")
            ->check(CLI::PositiveNumber);
        add_limit(support, "--discriminant-cap", "discriminant_cap", cfg.limits.discriminant_cap);
        add_format(support);

        CLI::App* grh = app.add_subcommand("grh-report", "EMPIRICAL split-prime and discriminant growth table");
        add_poly(grh);
        grh->add_option("--alpha", cfg.alpha, "base point");
        grh->add_option("--N-max", cfg.N_max, "largest N (default 6)")->check(CLI::PositiveNumber);
        grh->add_option("--p-max", cfg.p_max, "largest prime scanned (default 10000)")->check(CLI::PositiveNumber);
        add_limit(grh, "--discriminant-cap", "discriminant_cap", cfg.limits.discriminant_cap);
        add_limit(grh, "--scan-degree-cap", "scan_degree_cap", cfg.limits.scan_degree_cap);
        add_format(grh);

        std::reverse(args.begin(), args.end());
        app.parse(args);

        if (pcf->parsed()) cmd_pcf(cfg, out);
        else if (certify->parsed()) cmd_certify(cfg, out);
        else if (verify->parsed()) cmd_verify(cfg, out);
        else if (scan->parsed()) cmd_scan(cfg, out);
        else if (support->parsed()) cmd_support(cfg, out);
        else if (grh->parsed()) cmd_grh(cfg, out);
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const FalsificationError& e) {
        err << "falsification: " << e.what() << "\n" << e.transcript() << "\n";
        return kFalsified;
    } catch (const InvalidArgument& e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const WorkLimitError& e) {
        err << "work limit: " << e.what() << "\n";
        return kWorkLimit;
    }
}

}  // namespace arboreal::cli
