#include "sonc/json_io.hpp"

#include <ostream>
#include <stdexcept>

namespace sonc {

namespace {

json rational_str(const Rational& r) { return r.str(); }

Rational rational_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw std::invalid_argument(std::string("expected string field \"") + key + "\"");
    return Rational::parse(j[key].get<std::string>());
}

ExponentVector exponent_field(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("exponent vector must be an array");
    ExponentVector e;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw std::invalid_argument("exponent entries must be nonnegative integers");
        e.push_back(static_cast<int>(v.get<long long>()));
    }
    return e;
}

}  // namespace

json circuit_to_json(const CircuitData& c) {
    json j;
    j["n"] = c.n;
    j["outer"] = json::array();
    for (const ExponentVector& e : c.outer) j["outer"].push_back(e);
    j["outer_coeffs"] = json::array();
    for (const Rational& r : c.outer_coeffs) j["outer_coeffs"].push_back(rational_str(r));
    j["inner"] = c.inner;
    j["inner_coeff"] = rational_str(c.inner_coeff);
    j["weights"] = json::array();
    for (const Rational& r : c.weights) j["weights"].push_back(rational_str(r));
    return j;
}

CircuitData circuit_from_json(const json& j) {
    CircuitData c;
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::invalid_argument("circuit JSON: integer field \"n\" required");
    c.n = j["n"].get<int>();
    if (!j.contains("outer") || !j["outer"].is_array())
        throw std::invalid_argument("circuit JSON: array field \"outer\" required");
    for (const auto& e : j["outer"]) c.outer.push_back(exponent_field(e));
    if (!j.contains("outer_coeffs") || !j["outer_coeffs"].is_array())
        throw std::invalid_argument("circuit JSON: array field \"outer_coeffs\" required");
    for (const auto& r : j["outer_coeffs"]) {
        if (!r.is_string()) throw std::invalid_argument("circuit JSON: coefficients are strings");
        c.outer_coeffs.push_back(Rational::parse(r.get<std::string>()));
    }
    if (!j.contains("inner")) throw std::invalid_argument("circuit JSON: field \"inner\" required");
    c.inner = exponent_field(j["inner"]);
    c.inner_coeff = rational_field(j, "inner_coeff");
    if (!j.contains("weights") || !j["weights"].is_array())
        throw std::invalid_argument("circuit JSON: array field \"weights\" required");
    for (const auto& r : j["weights"]) {
        if (!r.is_string()) throw std::invalid_argument("circuit JSON: weights are strings");
        c.weights.push_back(Rational::parse(r.get<std::string>()));
    }
    validate(c);
    return c;
}

json certificate_to_json(const SoncCertificate& cert) {
    json j;
    j["n"] = cert.n;
    j["target"] = cert.target.str();
    j["parts"] = json::array();
    for (const SparsePolynomial& p : cert.parts) j["parts"].push_back(p.str());
    return j;
}

SoncCertificate certificate_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("certificate JSON: object expected");
    if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() < 1)
        throw std::invalid_argument("certificate JSON: positive integer field \"n\" required");
    const int n = j["n"].get<int>();
    if (!j.contains("target") || !j["target"].is_string())
        throw std::invalid_argument("certificate JSON: string field \"target\" required");
    if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
        throw std::invalid_argument("certificate JSON: non-empty array field \"parts\" required");
    SoncCertificate cert(n);
    cert.target = parse_polynomial(j["target"].get<std::string>(), n);
    for (const auto& p : j["parts"]) {
        if (!p.is_string())
            throw std::invalid_argument("certificate JSON: parts must be polynomial strings");
        cert.parts.push_back(parse_polynomial(p.get<std::string>(), n));
    }
    return cert;
}

json verification_to_json(const VerificationReport& rep) {
    json j;
    j["ok"] = rep.ok;
    j["sum_matches"] = rep.sum_matches;
    j["residual"] = rep.residual.str();
    j["first_failing_part"] = rep.first_failing_part;
    j["failure_reason"] = rep.failure_reason;
    j["parts"] = json::array();
    for (const PartReport& pr : rep.parts) {
        json p;
        p["is_circuit"] = pr.is_circuit;
        p["nonnegative"] = pr.nonnegative;
        p["reason"] = pr.is_circuit ? (pr.nonnegative ? "ok" : "not_nonnegative")
                                    : to_string(pr.defect);
        p["detail"] = pr.detail;
        if (pr.data) p["circuit"] = circuit_to_json(*pr.data);
        if (pr.power) {
            p["theta_q"] = rational_str(pr.power->theta_q);
            p["q"] = pr.power->q;
        }
        j["parts"].push_back(std::move(p));
    }
    return j;
}

json separation_to_json(const SeparationReport& rep) {
    json j;
    j["u"] = rational_str(rep.u);
    j["d"] = rep.d;
    j["n"] = rep.n;
    j["K"] = json::array();
    for (const auto& [lo, hi] : rep.K.intervals())
        j["K"].push_back(json::array({lo.str(), hi.str()}));
    j["witness"] = rep.witness.str();
    j["witness_factor"] = rep.witness_factor.str();
    j["L_of_witness"] = rational_str(rep.L_of_witness);
    j["lower_bound"] = rational_str(rep.lower_bound);
    j["lower_bound_float"] = rep.lower_bound.to_double();
    return j;
}

json attack_to_json(const AttackResult& res) {
    json j;
    j["lower_bound"] = rational_str(res.lower_bound);
    j["best_gap"] = rational_str(res.best_gap);
    j["best_gap_float"] = res.best_gap.to_double();
    j["best_grid_norm"] = res.best_grid_norm;
    j["margin"] = rational_str(res.margin);
    j["margin_float"] = res.margin.to_double();
    j["alarm"] = res.alarm;
    j["winner_restart"] = res.winner_restart;
    j["restarts"] = json::array();
    for (const RestartOutcome& o : res.restarts) {
        json r;
        r["best_gap"] = rational_str(o.best_gap);
        r["best_grid_norm"] = o.best_grid_norm;
        r["improvements"] = o.trace.size();
        j["restarts"].push_back(std::move(r));
    }
    return j;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
    os << "iteration,grid_norm_float,four_point_gap_rational,margin_float\n";
    const auto flags = os.flags();
    os.precision(17);
    for (const TraceRow& row : trace)
        os << row.iteration << ',' << row.grid_norm << ',' << row.four_point_gap.str() << ','
           << row.margin << '\n';
    os.flags(flags);
}

}  // namespace sonc
