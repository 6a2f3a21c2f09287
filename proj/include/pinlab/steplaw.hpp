#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pinlab::walks {

// Finite-support step distribution on Z. Probabilities may carry exact
// rational values (num/den); moments are then validated in integer
// arithmetic, with a float fallback otherwise.
struct StepLaw {
    struct Atom {
        int offset = 0;
        double p = 0;
        long long num = 0; // exact fraction when exact == true
        long long den = 1;
        bool exact = false;
    };
    std::vector<Atom> atoms; // sorted by offset, unique
    std::string name;

    int max_step() const;
    bool symmetric() const;
    double prob(int offset) const;
    std::uint64_t hash() const;
};

StepLaw make_law(const std::string& name,
                 const std::vector<std::pair<int, std::pair<long long, long long>>>& rational_atoms);
StepLaw make_law_float(const std::string& name,
                       const std::vector<std::pair<int, double>>& atoms);

// Default law {0: 3/8, +-1: 1/4, +-2: 1/16}: symmetric, aperiodic, unit
// variance.
StepLaw default_step_law();
// Wider alternative with step range 3 and unit variance.
StepLaw range3_step_law();
StepLaw law_by_name(const std::string& name);

struct MomentReport {
    double mean = 0, variance = 0, third = 0, fourth = 0;
    bool moments_exact = false;
    int period = 0;      // gcd of return times
    bool irreducible = false;
    bool accepted = false;
    std::string violation; // first violated assumption, empty when accepted
};

MomentReport validate_step_law(const StepLaw& law);

} // namespace pinlab::walks
