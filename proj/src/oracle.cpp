#include "relaycc/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "relaycc/errors.hpp"
#include "relaycc/quadrature.hpp"

namespace relaycc {

namespace {

constexpr std::size_t kMaxPoints = 8;
constexpr std::size_t kMinNodes = 16;

struct ComplexNode {
    cdouble z;
    double weight;  // normalized: weights sum to 1 against the CN(0,1) density
};

std::vector<ComplexNode> complex_nodes(std::size_t n) {
    const auto rule = gauss_hermite(n);
    std::vector<ComplexNode> out;
    out.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            out.push_back({{rule.nodes[a], rule.nodes[b]},
                           rule.weights[a] * rule.weights[b] / std::numbers::pi});
        }
    }
    return out;
}

// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

void check_inputs(const Constellation& s, const QuadratureConfig& q) {
    if (s.size() > kMaxPoints) {
        throw InvalidArgument("oracle supports at most " + std::to_string(kMaxPoints) +
                              " points per constellation, got " + std::to_string(s.size()));
    }
    if (q.nodes_per_dimension < kMinNodes) {
        throw InvalidArgument("oracle needs at least " + std::to_string(kMinNodes) +
                              " nodes per dimension");
    }
}

void check_budget(const QuadratureConfig& q, std::size_t observations, double index_tuples) {
    const double evals = std::pow(double(q.nodes_per_dimension), 2.0 * double(observations)) * index_tuples;
    if (evals > q.evaluation_budget) {
        throw InvalidArgument("oracle evaluation count " + std::to_string(evals) +
                              " exceeds budget " + std::to_string(q.evaluation_budget));
    }
}

// log M - (1/M) sum_i1 E_z[ log( sum_i exp(-|z - c x_i + c x_i1|^2) / exp(-|z|^2) ) ]
double single_user_nats(const Constellation& s, double c, const QuadratureConfig& q) {
    check_budget(q, 1, double(s.size() * s.size()));
    const auto nodes = complex_nodes(q.nodes_per_dimension);
    const double m = double(s.size());
    double outer = 0.0;
    for (std::size_t i1 = 0; i1 < s.size(); ++i1) {
        double expect = 0.0;
        for (const auto& [z, w] : nodes) {
            double lse = -INFINITY;
            for (std::size_t i = 0; i < s.size(); ++i) {
                lse = log_add(lse, -std::norm(z - c * s[i] + c * s[i1]));
            }
            expect += w * (lse + std::norm(z));
        }
        outer += expect;
    }
    return std::log(m) - outer / m;
}

// Destination multiple access: joint index (i, j) over source and relay.
double mac_nats(const Constellation& s, double c_s, const Constellation& r, double c_r,
                const QuadratureConfig& q) {
    check_budget(q, 1, double(s.size() * r.size()) * double(s.size() * r.size()));
    const auto nodes = complex_nodes(q.nodes_per_dimension);
    const double m = double(s.size() * r.size());
    double outer = 0.0;
    for (std::size_t i1 = 0; i1 < s.size(); ++i1) {
        for (std::size_t j1 = 0; j1 < r.size(); ++j1) {
            double expect = 0.0;
            for (const auto& [z, w] : nodes) {
                double lse = -INFINITY;
                for (std::size_t i = 0; i < s.size(); ++i) {
                    for (std::size_t j = 0; j < r.size(); ++j) {
                        const cdouble arg = z - c_s * s[i] - c_r * r[j] + c_s * s[i1] + c_r * r[j1];
                        lse = log_add(lse, -std::norm(arg));
                    }
                }
                expect += w * (lse + std::norm(z));
            }
            outer += expect;
        }
    }
    return std::log(m) - outer / m;
}

// Two independent observations of the same source symbol.
double two_observation_nats(const Constellation& s, double c_a, double c_b,
                            const QuadratureConfig& q) {
    check_budget(q, 2, double(s.size() * s.size()));
    const auto nodes = complex_nodes(q.nodes_per_dimension);
    const double m = double(s.size());
    std::vector<double> first(s.size());
    double outer = 0.0;
    for (std::size_t i1 = 0; i1 < s.size(); ++i1) {
        double expect = 0.0;
        for (const auto& [za, wa] : nodes) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                first[i] = -std::norm(za - c_a * s[i] + c_a * s[i1]);
            }
            double inner = 0.0;
            for (const auto& [zb, wb] : nodes) {
                double lse = -INFINITY;
                for (std::size_t i = 0; i < s.size(); ++i) {
                    lse = log_add(lse, first[i] - std::norm(zb - c_b * s[i] + c_b * s[i1]));
                }
                inner += wb * (lse + std::norm(za) + std::norm(zb));
            }
            expect += wa * inner;
        }
        outer += expect;
    }
    return std::log(m) - outer / m;
}

const Constellation& relay_of(const MiContext& ctx) {
    if (!ctx.relay) throw InvalidArgument("oracle: term needs a relay constellation");
    return *ctx.relay;
}

}  // namespace

double oracle_rate(RateTerm term, const MiContext& ctx, const QuadratureConfig& qcfg) {
    check_inputs(ctx.source, qcfg);
    const auto& f = ctx.fading;
    double nats = 0.0;
    switch (term) {
        case RateTerm::R1:
        case RateTerm::R7: {
            const auto& relay = relay_of(ctx);
            check_inputs(relay, qcfg);
            nats = mac_nats(ctx.source, f.c_ds, relay, f.c_dr, qcfg);
            break;
        }
        case RateTerm::R2:
        case RateTerm::R4: nats = single_user_nats(ctx.source, f.c_rs, qcfg); break;
        case RateTerm::R5:
        case RateTerm::R6:
        case RateTerm::R9: nats = single_user_nats(ctx.source, f.c_ds, qcfg); break;
        case RateTerm::R3:
        case RateTerm::R8: nats = two_observation_nats(ctx.source, f.c_rs, f.c_ds, qcfg); break;
    }
    return nats / std::numbers::ln2;
}

double oracle_rayleigh_expectation(const std::function<double(double)>& f, double variance,
                                   const QuadratureConfig& qcfg) {
    if (!(variance > 0.0)) throw InvalidArgument("Rayleigh variance must be positive");
    // c^2 ~ Exp(mean = variance): E[f(c)] = int_0^inf f(sqrt(variance t)) e^{-t} dt
    const auto rule = gauss_laguerre(qcfg.nodes_per_dimension);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(std::sqrt(variance * rule.nodes[i]));
    }
    return acc;
}

double oracle_binary_input_mi(double snr, std::size_t nodes) {
    if (!(snr >= 0.0)) throw InvalidArgument("snr must be nonnegative");
    // y = a + n, n ~ N(0, 1/2), a = +sqrt(snr) by symmetry; LLR = 4 a y.
    const auto rule = gauss_hermite(nodes);
    const double a = std::sqrt(snr);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double llr = 4.0 * a * (a + rule.nodes[i]);
        // log(1 + e^{-llr}), stable for either sign
        const double softplus = llr > 0 ? std::log1p(std::exp(-llr)) : -llr + std::log1p(std::exp(llr));
        acc += rule.weights[i] * softplus;
    }
    return 1.0 - acc / std::sqrt(std::numbers::pi) / std::numbers::ln2;
}

}  // namespace relaycc
