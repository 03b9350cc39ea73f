#pragma once

#include "sievelab/int_matrix.hpp"
#include "sievelab/normal_forms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sievelab {

/// Four-valued certified answer. ColimOnlyUnknown means: the sieve is a
/// colim sieve, every exclusion rule was inconclusive and every probe passed,
/// so membership in the canonical topology stays open. It is never collapsed
/// into a yes/no.
enum class Status {
    Canonical,
    NotCanonical,
    ColimOnlyUnknown,
    NotColimSieve,
};

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Canonical: return "Canonical";
        case Status::NotCanonical: return "NotCanonical";
        case Status::ColimOnlyUnknown: return "ColimOnlyUnknown";
        case Status::NotColimSieve: return "NotColimSieve";
    }
    return "?";
}

inline std::optional<Status> status_from_name(const std::string& s) {
    if (s == "Canonical") return Status::Canonical;
    if (s == "NotCanonical") return Status::NotCanonical;
    if (s == "ColimOnlyUnknown") return Status::ColimOnlyUnknown;
    if (s == "NotColimSieve") return Status::NotColimSieve;
    return std::nullopt;
}

/// Verdict with a machine-checkable certificate. Whichever witness fields
/// apply are set; the transcript records the re-verification steps that were
/// actually performed before the verdict was returned.
struct Verdict {
    Status status = Status::ColimOnlyUnknown;
    std::string rule;

    std::optional<IntMatrix> witness_map;             // failing probe / surjective generator
    std::optional<std::vector<Integer>> witness_vector; // avoiding vector, Bezout coefficients, lcm list
    std::optional<Integer> witness_prime;
    std::optional<GroupInvariants> colim_invariants;

    std::optional<std::string> witness_point;          // finset / fintop witnesses
    std::optional<std::vector<std::string>> witness_labels;

    std::vector<std::string> transcript;

    Verdict& note(std::string line) {
        transcript.push_back(std::move(line));
        return *this;
    }
};

} // namespace sievelab
