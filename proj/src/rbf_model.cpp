#include "quasirbf/rbf_model.hpp"
#include "quasirbf/errors.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace quasirbf {

RbfSpec RbfSpec::tps(int n, double c, double d) {
    RbfSpec s;
    s.family = RbfFamily::GeneralizedTps;
    s.n = n;
    s.c = c;
    s.d = d;
    s.validate();
    return s;
}

RbfSpec RbfSpec::power(int n, double c, double lambda, double beta) {
    RbfSpec s;
    s.family = RbfFamily::PowerFamily;
    s.n = n;
    s.c = c;
    s.lambda = lambda;
    s.beta = beta;
    s.validate();
    return s;
}

bool RbfSpec::tps_d_is_integer() const {
    return std::abs(d - std::round(d)) < 1e-12 && d >= 0.5;
}

void RbfSpec::validate() const {
    if (n < 1) throw spec_error("RbfSpec: dimension n must be >= 1");
    if (!(c > 0.0)) throw spec_error("RbfSpec: shape parameter c must be > 0");
    if (family == RbfFamily::GeneralizedTps) {
        if (!(d > 0.0)) throw spec_error("RbfSpec: TPS exponent d must be > 0");
    } else {
        if (lambda == 0.0) throw spec_error("RbfSpec: lambda must be nonzero");
        double br = std::round(beta);
        if (br >= 1.0 && std::abs(beta - br) < 1e-12)
            throw spec_error("RbfSpec: beta must not be a positive integer");
        if (beta == 0.0) throw spec_error("RbfSpec: beta must be nonzero");
    }
}

double eval_rbf(const RbfSpec& spec, double r) {
    if (r < 0.0) throw spec_error("eval_rbf: radius must be >= 0");
    if (spec.family == RbfFamily::GeneralizedTps) {
        double u = std::pow(spec.c, 2.0 * spec.d) + std::pow(r, 2.0 * spec.d);
        return u * std::log(u);
    }
    if (r == 0.0) {
        if (spec.lambda > 0.0) return std::pow(std::pow(spec.c, spec.lambda), spec.beta);
        if (spec.beta > 0.0)
            throw spec_error("eval_rbf: power-family RBF with lambda < 0, beta > 0 is singular at r = 0");
        return 0.0; // lambda < 0, beta < 0: r^lambda -> +inf, so phi -> 0
    }
    double u = std::pow(spec.c, spec.lambda) + std::pow(r, spec.lambda);
    return std::pow(u, spec.beta);
}

TpsSplit eval_tps_split(const RbfSpec& spec, double r) {
    if (spec.family != RbfFamily::GeneralizedTps)
        throw spec_error("eval_tps_split: spec is not a generalized TPS");
    if (r < 0.0) throw spec_error("eval_tps_split: radius must be >= 0");
    double c2d = std::pow(spec.c, 2.0 * spec.d);
    double r2d = std::pow(r, 2.0 * spec.d);
    double lg = std::log1p(r2d / c2d);
    TpsSplit out;
    out.phi1 = 2.0 * spec.d * c2d * std::log(spec.c);
    out.phi2 = 2.0 * spec.d * r2d * std::log(spec.c);
    out.phi3 = r2d * lg;
    out.phi4 = c2d * lg;
    return out;
}

std::string RbfSpec::to_json() const {
    nlohmann::ordered_json j;
    j["family"] = family == RbfFamily::GeneralizedTps ? "tps" : "power";
    j["n"] = n;
    j["c"] = c;
    if (family == RbfFamily::GeneralizedTps) {
        j["d"] = d;
    } else {
        j["lambda"] = lambda;
        j["beta"] = beta;
    }
    return j.dump();
}

RbfSpec RbfSpec::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw spec_error(std::string("RbfSpec: invalid JSON: ") + e.what());
    }
    RbfSpec s;
    try {
        std::string fam = j.at("family").get<std::string>();
        if (fam == "tps") {
            s.family = RbfFamily::GeneralizedTps;
            s.d = j.at("d").get<double>();
        } else if (fam == "power") {
            s.family = RbfFamily::PowerFamily;
            s.lambda = j.at("lambda").get<double>();
            s.beta = j.at("beta").get<double>();
        } else {
            throw spec_error("RbfSpec: family must be \"tps\" or \"power\"");
        }
        s.n = j.at("n").get<int>();
        s.c = j.at("c").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw spec_error(std::string("RbfSpec: missing or malformed field: ") + e.what());
    }
    s.validate();
    return s;
}

} // namespace quasirbf
