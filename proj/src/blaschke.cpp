#include "buafd/blaschke.hpp"

#include <algorithm>
#include <cmath>

#include "buafd/errors.hpp"

namespace buafd {

Complex eval_evaluator(Complex a, Complex z) {
    const double abs_a = std::abs(a);
    if (abs_a >= 1.0) throw DomainError("evaluator parameter must satisfy |a| < 1");
    if (std::abs(z) > 1.0 + 1e-12) throw DomainError("evaluator argument must satisfy |z| <= 1");
    return std::sqrt(1.0 - abs_a * abs_a) / (1.0 - std::conj(a) * z);
}

Complex eval_blaschke_factor(Complex a, Complex z) {
    return (z - a) / (1.0 - std::conj(a) * z);
}

InnerFunction make_inner(std::vector<Complex> roots) {
    for (const Complex& r : roots) {
        if (std::abs(r) >= 1.0) throw InvalidInput("inner function root must satisfy |r| < 1");
    }
    return InnerFunction{std::move(roots)};
}

Complex eval_inner(const InnerFunction& inner, Complex z) {
    for (const Complex& r : inner.roots) {
        if (std::abs(r) >= 1.0) throw InvalidInput("inner function root must satisfy |r| < 1");
    }
    // Multiply factors by ascending |r| to keep the accumulated rounding
    // error bounded for long products.
    std::vector<Complex> ordered(inner.roots);
    std::sort(ordered.begin(), ordered.end(), [](const Complex& p, const Complex& q) {
        const double ap = std::abs(p), aq = std::abs(q);
        if (ap != aq) return ap < aq;
        if (p.real() != q.real()) return p.real() < q.real();
        return p.imag() < q.imag();
    });
    Complex acc{1.0, 0.0};
    for (const Complex& r : ordered) acc *= eval_blaschke_factor(r, z);
    return acc;
}

Complex eval_modified_blaschke(std::span<const Complex> params, Complex z) {
    if (params.empty()) throw InvalidInput("modified Blaschke product needs parameters");
    Complex acc = eval_evaluator(params.back(), z);
    for (std::size_t k = 0; k + 1 < params.size(); ++k) {
        if (std::abs(params[k]) >= 1.0) throw DomainError("parameter must satisfy |a| < 1");
        acc *= eval_blaschke_factor(params[k], z);
    }
    return acc;
}

AnalyticFrame evaluator_frame(Complex a, std::size_t length) {
    const double abs_a = std::abs(a);
    if (abs_a >= 1.0) throw DomainError("evaluator parameter must satisfy |a| < 1");
    const std::size_t keep = (length + 1) / 2;
    const double scale = std::sqrt(1.0 - abs_a * abs_a);
    std::vector<Complex> coeffs(length, Complex{0.0, 0.0});
    Complex pow{1.0, 0.0};  // conj(a)^k
    const Complex ac = std::conj(a);
    for (std::size_t k = 0; k < keep; ++k) {
        coeffs[k] = scale * pow;
        pow *= ac;
    }
    return AnalyticFrame::from_coeffs(std::move(coeffs), length);
}

}  // namespace buafd
