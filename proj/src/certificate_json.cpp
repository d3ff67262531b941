#include "arboreal/certificate_json.hpp"

#include <cmath>

#include <json.hpp>

#include "arboreal/errors.hpp"

namespace arboreal {

using json = nlohmann::ordered_json;

namespace {

json claim_json(const LowerBoundCertificate& cert) {
    const AsymptoticClaim& a = cert.claim;
    json j;
    j["n0_min"] = a.n0_min;
    j["p"] = a.p;
    j["m0"] = a.m0;
    j["N_offset"] = a.N_offset;
    j["statement"] = a.statement;
    j["base"] = std::to_string(cert.d) + "^(1/" + std::to_string(a.n0_min) + ")";
    j["base_value"] = std::pow(static_cast<double>(cert.d), 1.0 / a.n0_min);
    return j;
}

template <class T>
T field(const json& doc, const char* key) {
    if (!doc.contains(key)) throw InvalidArgument(std::string("certificate: missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("certificate: bad field '") + key + "': " + e.what());
    }
}

}  // namespace

std::string certificate_to_json(const LowerBoundCertificate& cert) {
    json doc;
    doc["format"] = kCertificateFormat;
    doc["d"] = cert.d;
    doc["c"] = cert.c.str();
    doc["alpha"] = cert.alpha.str();
    if (cert.shifted) {
        doc["alpha_shift"] = {{"alpha_prime", cert.alpha_used.str()},
                              {"N_offset", 1},
                              {"note", "f^-1(-c) = {0}: rows certify alpha' = 0 at N' = N - 1"}};
    } else {
        doc["alpha_shift"] = nullptr;
    }
    doc["seed"] = cert.seed;
    doc["N_max"] = cert.N_max;
    doc["degree_cap"] = cert.degree_cap;
    doc["n_search_max"] = cert.n_search_max;

    json primes = json::array();
    for (const auto& p : cert.primes)
        primes.push_back({{"p", p.p}, {"n0", p.n0}, {"found_at_n", p.found_at_n},
                          {"periodic_shortcut", p.periodic_shortcut}});
    doc["primes"] = std::move(primes);

    json rows = json::array();
    for (const auto& r : cert.rows)
        rows.push_back({{"p", r.p},
                        {"N", r.N},
                        {"e_N", r.e_N},
                        {"m_N", r.m_N},
                        {"ru_check", r.ru_check},
                        {"bound", r.bound},
                        {"order_bound", integer_to_u64(r.order_bound)}});
    doc["rows"] = std::move(rows);

    json agg = json::array();
    for (const auto& a : cert.aggregate) agg.push_back({{"N", a.N}, {"lcm_e_N", a.lcm_e_N}});
    doc["aggregate"] = std::move(agg);
    doc["asymptotic_claim"] = claim_json(cert);
    if (cert.truncated_at)
        doc["truncated_at"] = *cert.truncated_at;
    else
        doc["truncated_at"] = nullptr;
    return doc.dump(2) + "\n";
}

CertificateCheck verify_certificate_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("certificate: not JSON: ") + e.what());
    }
    if (!doc.is_object() || field<std::string>(doc, "format") != kCertificateFormat)
        throw InvalidArgument("certificate: unknown format");

    CertifyOptions opt;
    const unsigned d = field<unsigned>(doc, "d");
    const Rational c = Rational::parse(field<std::string>(doc, "c"));
    const Rational alpha = Rational::parse(field<std::string>(doc, "alpha"));
    opt.seed = field<std::uint64_t>(doc, "seed");
    opt.N_max = field<unsigned>(doc, "N_max");
    opt.degree_cap = field<std::size_t>(doc, "degree_cap");
    opt.search.n_search_max = field<unsigned>(doc, "n_search_max");

    // stored rows must at least be internally consistent
    std::string transcript;
    if (doc.contains("rows") && doc["rows"].is_array()) {
        for (const auto& r : doc["rows"]) {
            try {
                const Integer p = integer_from_u64(r.at("p").get<std::uint64_t>());
                const Integer e = integer_from_u64(r.at("e_N").get<std::uint64_t>());
                Integer dm;
                mpz_ui_pow_ui(dm.get_mpz_t(), d, r.at("m_N").get<unsigned>());
                if ((pow_mod(p, e, dm) == 1) != r.at("ru_check").get<bool>())
                    transcript += "row p = " + p.get_str() + ", N = " + std::to_string(r.at("N").get<unsigned>()) +
                                  ": ru_check does not match d^m_N | p^e_N - 1\n";
            } catch (const json::exception& e) {
                throw InvalidArgument(std::string("certificate: malformed row: ") + e.what());
            }
        }
    }

    const std::string expected = certificate_to_json(certify_unicritical(d, c, alpha, opt));
    CertificateCheck out;
    out.byte_identical = expected == text;
    for (const auto& op : json::diff(doc, json::parse(expected))) out.differences.push_back(op["path"]);
    if (!out.differences.empty() || !transcript.empty()) {
        for (const auto& path : out.differences) transcript += "differs from recomputation: " + path + "\n";
        throw FalsificationError("certificate does not match its recomputation", transcript);
    }
    return out;
}

}  // namespace arboreal
