#ifndef QUASIRBF_RBF_MODEL_HPP
#define QUASIRBF_RBF_MODEL_HPP

#include <string>

namespace quasirbf {

enum class RbfFamily { GeneralizedTps, PowerFamily };

// One member of either RBF family:
//   GeneralizedTps: phi(r) = (c^{2d} + r^{2d}) log(c^{2d} + r^{2d}),  d in N
//   PowerFamily:    phi(r) = (c^lambda + r^lambda)^beta,  lambda != 0, beta not in N
struct RbfSpec {
    RbfFamily family = RbfFamily::GeneralizedTps;
    int n = 2;          // ambient dimension
    double c = 1.0;     // shape parameter, c > 0
    double d = 1.0;     // TPS exponent; integer >= 1 for everything except the
                        // non-integer leading-asymptotics branch
    double lambda = 0.0;
    double beta = 0.0;

    static RbfSpec tps(int n, double c, double d);
    static RbfSpec power(int n, double c, double lambda, double beta);

    // Throws spec_error on invariant violations (c <= 0, n < 1, beta in N, ...).
    void validate() const;
    bool tps_d_is_integer() const;

    std::string to_json() const;              // canonical encoding
    static RbfSpec from_json(const std::string& text);
};

// Values of the four TPS summands at one radius; their sum equals eval_rbf.
struct TpsSplit {
    double phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0;
    double sum() const { return phi1 + phi2 + phi3 + phi4; }
};

// phi(r). For PowerFamily with lambda < 0 and beta > 0 the RBF is singular at
// the origin and r = 0 is a domain error; for lambda < 0, beta < 0 the limit
// phi(0+) = 0 is returned.
double eval_rbf(const RbfSpec& spec, double r);

// The four-term split of the TPS family (GeneralizedTps only).
TpsSplit eval_tps_split(const RbfSpec& spec, double r);

} // namespace quasirbf

#endif
