#pragma once

#include <cstddef>
#include <vector>

#include "buafd/hardy.hpp"

namespace buafd {

// Output of one decomposition level: energy coefficient, selected grid
// parameter, the zeros divided out of this level's inner function, and the
// squared H2 norm of the remainder handed to the next level.
struct LevelResult {
    Complex c{0.0, 0.0};
    Complex a{0.0, 0.0};
    std::vector<Complex> roots;
    double residual_energy = 0.0;
};

// Per-window decomposition: c0 plus the ordered level results. Level n's
// basis element is the cumulative inner function of levels 1..n times the
// modified Blaschke product of parameters a_1..a_n.
struct DecompositionRecord {
    double c0 = 0.0;
    std::vector<LevelResult> levels;
    std::size_t window_len = 0;
    std::size_t window_index = 0;
};

// Number of zeros inside the unit disk, computed as the winding number of
// the boundary values (wrapped phase-difference sum over the L nodes).
// Throws IllConditioned when the boundary modulus dips below
// 1e-8 * max |f| or the winding sum is far from an integer.
int count_zeros(const AnalyticFrame& f);

struct ZeroExtraction {
    std::vector<Complex> roots;
    // refined[j] is false when Newton refinement failed and the grid argmin
    // was kept as a low-precision root.
    std::vector<bool> refined;
    AnalyticFrame outer;
};

// Peels m zeros off f: grid argmin of |G_j|, damped Newton refinement on the
// power series, boundary division by the Blaschke factor, Hardy
// re-projection. The returned outer part has winding number 0 or the call
// throws FactorizationFailed.
ZeroExtraction extract_zeros(const AnalyticFrame& f, int m, const DiskGrid& grid, double delta);

struct Selection {
    Complex a{0.0, 0.0};
    Complex c{0.0, 0.0};
};

// Maximal selection: a maximizes (1-|a|^2) |outer(a)|^2 over the grid, ties
// broken by smaller |a| then smaller arg; c = sqrt(1-|a|^2) outer(a).
Selection maximal_select(const AnalyticFrame& outer, const DiskGrid& grid);

struct UnwindStep {
    LevelResult level;
    AnalyticFrame next;
};

// One full level: factor out the inner part, select the dominant evaluator,
// split off its coefficient and hand back the remainder.
UnwindStep unwind_step(const AnalyticFrame& f, const DiskGrid& grid, double delta);

// N-level decomposition of a real window, with early stop once the residual
// energy falls below 1e-12 of the initial energy.
DecompositionRecord unwind(const RealFrame& frame, int n_levels, const DiskGrid& grid,
                           double delta);

}  // namespace buafd
