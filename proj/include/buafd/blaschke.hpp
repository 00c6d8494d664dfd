#pragma once

#include <span>
#include <vector>

#include "buafd/hardy.hpp"

namespace buafd {

// Normalized reproducing kernel of H2 at a: sqrt(1-|a|^2) / (1 - conj(a) z).
Complex eval_evaluator(Complex a, Complex z);

// Single Blaschke factor (z - a) / (1 - conj(a) z); a root at 0 gives z.
Complex eval_blaschke_factor(Complex a, Complex z);

// Finite Blaschke product built from roots inside the disk (multiset,
// multiplicity by repetition). Empty root list is the constant 1.
struct InnerFunction {
    std::vector<Complex> roots;
};

InnerFunction make_inner(std::vector<Complex> roots);

Complex eval_inner(const InnerFunction& inner, Complex z);

// Element of the rational orthonormal system for an ordered parameter list:
// B_n(z) = e_{a_n}(z) * prod_{k<n} (z - a_k)/(1 - conj(a_k) z).
// With every a_k = 0 this reduces to the monomial z^{n-1}.
Complex eval_modified_blaschke(std::span<const Complex> params, Complex z);

// Truncated-series frame of the evaluator e_a on an L-node circle. Within
// the model this makes <f, e_a> = sqrt(1-|a|^2) f(a) exact for band-limited f.
AnalyticFrame evaluator_frame(Complex a, std::size_t length);

}  // namespace buafd
