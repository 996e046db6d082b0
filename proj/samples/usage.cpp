// Walk through the library on a few named states.

#include "pauliscope/pauliscope.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

using namespace pauliscope;

namespace {

void report(const char* name, const PauliRep& p) {
    const GlobalInvariants g = global_invariants(p);
    const CanonicalForm cf = canonicalize(p);
    const FamilyDescriptor& f = cf.descriptor;
    const bool sep = is_separable(p).satisfied;
    const double conc = concurrence(p).value;
    const LsdResult lsd = optimal_lsd(p);
    std::printf("%-18s A=(%.4f, %.4f, %.4f)  class %s  c=(%.3f, %.3f, %.3f)\n", name, g.a2, g.a1, g.a0,
                f.cls.str().c_str(), f.c(0), f.c(1), f.c(2));
    std::printf("%-18s separable=%d  C=%.6f  S=%.6f  S+C=%.6f\n", "", sep, conc, lsd.lambda, lsd.lambda + conc);
}

} // namespace

int main() {
    report("Bell", bell_state());
    report("Werner 0.6", werner_state(0.6));
    report("pure p=0.6", pure_state(0.6));
    report("rank-2 (0.5,pi/3)", rank2_state(0.5, std::numbers::pi / 3));
    report("random seed 1", random_state(1));

    // locally rotated copies land in the same family
    std::mt19937_64 rng(3);
    const PauliRep p = random_state(2);
    const PauliRep q = apply_local(p, random_local_rotation(rng));
    std::printf("same family after a local rotation: %d\n", same_family(p, q));

    // the LSD parts of a Werner state
    const LsdResult w = optimal_lsd(werner_state(0.6));
    std::printf("Werner 0.6: separable part has PH3 minimum %.2e, reconstruction error %.1e\n",
                barely_separable_residual(w.sep_part), w.certificates.reconstruction_error);
    const bool ok = std::abs(w.lambda - 0.6) < 1e-3 && same_family(p, q);
    return ok ? 0 : 1;
}
