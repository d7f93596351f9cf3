#include "report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace entrank::cli {

using nlohmann::json;

namespace {

json vector_json(const CVector& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back({z.real(), z.imag()});
    return a;
}

json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

// JSON has no infinity; alpha = inf is written as the string "inf".
json alpha_json(double alpha) { return std::isinf(alpha) ? json("inf") : json(alpha); }

std::string alpha_label(double alpha) {
    if (std::isinf(alpha)) return "inf";
    std::ostringstream os;
    os << alpha;
    return os.str();
}

}  // namespace

json tolerances_json(const Tolerances& tol) {
    return json{{"epsilon_rank", tol.rank_epsilon},
                {"tol_psd", tol.psd},
                {"hermitian_relative", 1e-12},
                {"trace", 1e-12},
                {"filter_singular_ratio", 1e-14},
                {"flat_spectrum", 1e-9}};
}

json report_envelope(const std::string& command, const std::string& input_hash, const Tolerances& tol) {
    return json{{"tool", kToolName},
                {"version", kToolVersion},
                {"command", command},
                {"input_hash", input_hash},
                {"tolerances", tolerances_json(tol)}};
}

json to_json(const CriterionReport& r) {
    json j;
    j["dims"] = {r.dims.a, r.dims.b};
    j["overall"] = to_string(r.overall);
    json verdicts = json::object();
    for (const auto& [name, v] : r.verdicts) verdicts[name] = to_string(v);
    j["verdicts"] = std::move(verdicts);
    j["witnesses"] = r.witnesses;
    j["ppt"] = {{"ppt", r.ppt.ppt},
                {"min_eigenvalue", r.ppt.min_eigenvalue},
                {"support", {r.ppt.support_a, r.ppt.support_b}}};
    j["reduction"] = {{"violated", r.reduction.violated},
                      {"min_eigenvalue_a", r.reduction.min_eigenvalue_a},
                      {"min_eigenvalue_b", r.reduction.min_eigenvalue_b},
                      {"witness_side", to_string(r.reduction.witness_side)},
                      {"witness_value", r.reduction.witness_value},
                      {"witness_vector", vector_json(r.reduction.witness_vector)}};
    json rank = {{"verdict", to_string(r.rank.verdict)},
                 {"rank", r.rank.rank},
                 {"rank_a", r.rank.rank_a},
                 {"rank_b", r.rank.rank_b},
                 {"diagnostic", r.rank.diagnostic}};
    if (r.rank.filtered_side) rank["filtered_side"] = to_string(*r.rank.filtered_side);
    if (r.rank.success_probability) rank["filter_success_probability"] = *r.rank.success_probability;
    if (r.rank.filtered_lambda_max) rank["filtered_lambda_max"] = *r.rank.filtered_lambda_max;
    if (r.rank.witness_value) rank["witness_value"] = *r.rank.witness_value;
    if (r.rank.bound) rank["bound"] = *r.rank.bound;
    j["rank_marginal"] = std::move(rank);
    json ent = json::array();
    for (const auto& e : r.entropy) {
        ent.push_back({{"alpha", alpha_json(e.alpha)},
                       {"s_state", e.s_state},
                       {"s_a", e.s_a},
                       {"s_b", e.s_b},
                       {"violated", e.violated},
                       {"proven_case", e.proven_case},
                       {"verdict", to_string(e.verdict)}});
    }
    j["entropy"] = std::move(ent);
    j["participation_ratio"] = r.participation_ratio;
    j["support"] = {{"rank", r.support.rank},
                    {"rank_a", r.support.rank_a},
                    {"rank_b", r.support.rank_b},
                    {"confined", r.support.confined}};
    if (r.two_qubit) {
        const auto& t = *r.two_qubit;
        j["two_qubit_mixture"] = {{"p", t.p},
                                  {"coefficients", vector_json({t.a, t.b, t.c, t.d})},
                                  {"rotation_a", matrix_json(t.rotation_a)},
                                  {"rotation_b", matrix_json(t.rotation_b)},
                                  {"det_pt", t.det_pt},
                                  {"det_minor", t.det_minor},
                                  {"closed_form_term", t.closed_form_term},
                                  {"det_pt_pure", t.det_pt_pure},
                                  {"decomposition_residual", t.decomposition_residual},
                                  {"min_eigenvalue", t.min_eigenvalue},
                                  {"psi_entangled", t.psi_entangled},
                                  {"closed_form_used", t.closed_form_used},
                                  {"agree", t.agree},
                                  {"verdict", to_string(t.verdict)}};
    }
    j["notes"] = r.notes;
    return j;
}

json to_json(const EfResult& r, bool include_ensemble) {
    json j{{"value", r.value},
           {"k", r.k},
           {"restarts", r.restarts},
           {"best_restart", r.best_restart},
           {"converged", r.converged},
           {"per_restart_values", r.per_restart_values},
           {"ensemble_size", r.best_ensemble.members.size()},
           {"ensemble_reconstruction_error", r.best_ensemble.reconstruction_error()},
           {"caveat", kUpperBoundCaveat}};
    if (include_ensemble) {
        json members = json::array();
        for (const auto& m : r.best_ensemble.members)
            members.push_back({{"weight", m.weight},
                               {"entanglement", pure_entanglement(m.psi)},
                               {"amplitudes", vector_json(m.psi.amplitudes())}});
        j["ensemble"] = std::move(members);
    }
    return j;
}

json to_json(const AdditivityTable& t) {
    json rows = json::array();
    for (const auto& row : t.rows)
        rows.push_back({{"n", row.n},
                        {"rank", row.rank},
                        {"k", row.k},
                        {"ef_upper_bound", row.ef_upper_bound},
                        {"per_copy", row.per_copy}});
    return json{{"rows", rows},
                {"k_cap", t.k_cap},
                {"budget_exceeded", t.budget_exceeded},
                {"subadditivity_evidence", t.subadditivity_evidence},
                {"caveat", std::string("upper-bound comparison only, not a proof; ") + kUpperBoundCaveat}};
}

void print_report(std::ostream& out, const CriterionReport& r) {
    out << std::setprecision(10);
    out << "state: " << r.dims.a << "x" << r.dims.b << ", rank " << r.rank.rank << ", marginal ranks "
        << r.rank.rank_a << " and " << r.rank.rank_b << "\n";
    out << "  ppt              " << to_string(r.ppt.verdict) << " (PPT=" << (r.ppt.ppt ? "true" : "false")
        << ", min eigenvalue of PT " << r.ppt.min_eigenvalue << ")\n";
    out << "  reduction        " << to_string(r.reduction.verdict) << " (min eigenvalues A " << r.reduction.min_eigenvalue_a
        << ", B " << r.reduction.min_eigenvalue_b << ")\n";
    out << "  rank_marginal    " << to_string(r.rank.verdict) << " (" << r.rank.diagnostic;
    if (r.rank.witness_value) out << "; filtered reduction witness " << *r.rank.witness_value;
    out << ")\n";
    for (const auto& e : r.entropy) {
        out << "  entropy alpha=" << std::left << std::setw(3) << alpha_label(e.alpha) << std::right << " "
            << to_string(e.verdict) << " (S=" << e.s_state << ", S_A=" << e.s_a << ", S_B=" << e.s_b << ")\n";
    }
    out << "  support          " << to_string(r.support.verdict) << " (" << r.support.rank_a << "x" << r.support.rank_b
        << " for rank " << r.support.rank << ")\n";
    if (r.two_qubit) {
        out << "  two_qubit_mixture " << to_string(r.two_qubit->verdict) << " (p=" << r.two_qubit->p
            << ", det PT=" << r.two_qubit->det_pt << ", closed-form term " << r.two_qubit->closed_form_term << ")\n";
    }
    out << "  participation ratio " << r.participation_ratio << "\n";
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
    out << "overall: " << to_string(r.overall) << "\n";
}

void print_ef(std::ostream& out, const EfResult& r, std::optional<double> oracle) {
    out << std::setprecision(10);
    out << "entanglement of formation (upper bound): " << r.value << " bits\n";
    out << "  k=" << r.k << ", restarts run " << r.restarts << ", best restart " << r.best_restart
        << (r.converged ? ", converged" : ", not converged") << "\n";
    if (oracle) out << "  two-qubit closed form: " << *oracle << " (difference " << r.value - *oracle << ")\n";
    out << "  note: " << kUpperBoundCaveat << "\n";
}

void print_additivity(std::ostream& out, const AdditivityTable& t) {
    out << std::setprecision(10);
    out << "n  rank  k  ef_upper_bound  per_copy\n";
    for (const auto& row : t.rows)
        out << row.n << "  " << row.rank << "  " << row.k << "  " << row.ef_upper_bound << "  " << row.per_copy << "\n";
    out << "k cap " << t.k_cap << (t.budget_exceeded ? "; time budget exceeded, table is partial" : "") << "\n";
    out << (t.subadditivity_evidence ? "subadditivity evidence (upper bounds only, not a proof)\n"
                                     : "no subadditivity evidence\n");
}

}  // namespace entrank::cli
