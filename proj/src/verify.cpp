#include "relaycc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "relaycc/channel.hpp"
#include "relaycc/constellation.hpp"

namespace relaycc {

namespace {

struct TestPoint {
    FadingDraw fading;
    double power;
};

// Magnitudes in [0.3, 1.5], power in [-6, 3] dB: far enough from zero to
// exercise every term, low enough for the quadrature to converge.
std::vector<TestPoint> draw_points(std::uint64_t seed, std::size_t constellation_index,
                                   std::size_t count) {
    RandomStream rng = RandomStream(seed).substream(0x7E57ULL).substream(constellation_index);
    std::uniform_real_distribution<double> mag(0.3, 1.5);
    std::uniform_real_distribution<double> pdb(-6.0, 3.0);
    std::vector<TestPoint> out;
    for (std::size_t i = 0; i < count; ++i) {
        TestPoint tp;
        tp.fading.c_ds = mag(rng.engine());
        tp.fading.c_rs = mag(rng.engine());
        tp.fading.c_dr = mag(rng.engine());
        tp.power = db_to_linear(pdb(rng.engine()));
        out.push_back(tp);
    }
    return out;
}

}  // namespace

VerifyReport run_verify_suite(const VerifyOptions& opts, const RateEstimator& estimator) {
    VerifyReport report;
    double worst_ratio = -1.0;
    const QuadratureConfig qcfg{opts.nodes, QuadratureConfig{}.evaluation_budget};
    for (std::size_t ci = 0; ci < opts.constellations.size(); ++ci) {
        const Constellation base = parse_standard(opts.constellations[ci]);
        const auto points = draw_points(opts.seed, ci, opts.points);
        for (std::size_t pi = 0; pi < points.size(); ++pi) {
            const auto& tp = points[pi];
            const Constellation scaled = scale(base, tp.power);
            for (RateTerm term : opts.terms) {
                const RandomStream stream = RandomStream(opts.seed)
                                                .substream(ci)
                                                .substream(pi)
                                                .substream(static_cast<std::uint64_t>(term));
                MiContext ctx{scaled, scaled, tp.fading, opts.noise_samples, stream};
                VerifyCase vc;
                vc.term = term;
                vc.constellation = base.label();
                vc.fading = tp.fading;
                vc.power = tp.power;
                vc.mc = estimator(term, ctx);
                vc.oracle_bits = oracle_rate(term, ctx, qcfg);
                vc.deviation = std::abs(vc.mc.bits - vc.oracle_bits);
                vc.tolerance = std::max(opts.se_multiplier * vc.mc.std_error, opts.min_tolerance);
                vc.pass = std::isfinite(vc.mc.bits) && vc.deviation < vc.tolerance;
                report.all_pass = report.all_pass && vc.pass;
                const double ratio = vc.deviation / vc.tolerance;
                if (!(ratio <= worst_ratio)) {
                    worst_ratio = ratio;
                    report.worst = report.cases.size();
                }
                report.cases.push_back(vc);
            }
        }
    }
    return report;
}

}  // namespace relaycc
