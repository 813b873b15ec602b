#pragma once

#include <string>
#include <vector>

#include "planefix/geom.hpp"

namespace planefix {

enum class Verdict { SATISFIED, VIOLATED, UNDECIDED, NOT_APPLICABLE };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// Honest outcome of a sampled predicate.
struct TriState {
    Verdict verdict = Verdict::UNDECIDED;
    double margin = 0.0;      ///< achieved minimum when SATISFIED; closest approach otherwise
    double resolution = 0.0;  ///< limiting sampling resolution
    std::vector<Point> witness;
    std::string note;

    static TriState satisfied(double margin, double resolution = 0.0) {
        return {Verdict::SATISFIED, margin, resolution, {}, {}};
    }
    static TriState violated(std::vector<Point> witness, std::string note = {}) {
        return {Verdict::VIOLATED, 0.0, 0.0, std::move(witness), std::move(note)};
    }
    static TriState undecided(double closest, double resolution, std::string note = {}) {
        return {Verdict::UNDECIDED, closest, resolution, {}, std::move(note)};
    }
    static TriState not_applicable(std::string note = {}) {
        return {Verdict::NOT_APPLICABLE, 0.0, 0.0, {}, std::move(note)};
    }

    bool ok() const { return verdict == Verdict::SATISFIED; }
};

/// Conjunction: the worst verdict wins (VIOLATED > UNDECIDED > NOT_APPLICABLE > SATISFIED).
TriState combine(const TriState& a, const TriState& b);

}  // namespace planefix
