#include "buafd/unwinding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "buafd/blaschke.hpp"
#include "buafd/errors.hpp"
#include "buafd/fft.hpp"

namespace buafd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kZeroFloorRatio = 1e-8;
constexpr int kMaxZerosPerLevel = 64;
constexpr int kNewtonSteps = 20;

double max_boundary_abs(const AnalyticFrame& f) {
    double m = 0.0;
    for (const Complex& v : f.boundary()) m = std::max(m, std::abs(v));
    return m;
}

// Power series and derivative in one pass, ascending powers.
void series_value_and_derivative(std::span<const Complex> coeffs, std::size_t top, Complex z,
                                 Complex& value, Complex& derivative) {
    value = Complex{0.0, 0.0};
    derivative = Complex{0.0, 0.0};
    Complex z_pow{1.0, 0.0};  // z^{k-1} while accumulating the derivative term
    for (std::size_t k = 1; k <= top; ++k) {
        derivative += static_cast<double>(k) * coeffs[k] * z_pow;
        z_pow *= z;
    }
    z_pow = Complex{1.0, 0.0};
    for (std::size_t k = 0; k <= top; ++k) {
        value += coeffs[k] * z_pow;
        z_pow *= z;
    }
}

struct NewtonOutcome {
    Complex root{0.0, 0.0};
    bool converged = false;
};

NewtonOutcome refine_root(const AnalyticFrame& g, Complex start, double tol_abs) {
    const auto coeffs = g.coeffs();
    const std::size_t top = g.effective_degree();
    Complex z = start;
    Complex value, derivative;
    series_value_and_derivative(coeffs, top, z, value, derivative);
    for (int iter = 0; iter < kNewtonSteps; ++iter) {
        if (std::abs(value) < tol_abs) return {z, std::abs(z) < 1.0};
        if (std::abs(derivative) < std::numeric_limits<double>::min() * 1e10) break;
        const Complex step = value / derivative;
        double damping = 1.0;
        bool moved = false;
        for (int halving = 0; halving < 8; ++halving) {
            Complex candidate = z - damping * step;
            if (std::abs(candidate) < 0.9999999) {
                Complex cv, cd;
                series_value_and_derivative(coeffs, top, candidate, cv, cd);
                if (std::abs(cv) < std::abs(value)) {
                    z = candidate;
                    value = cv;
                    derivative = cd;
                    moved = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if (!moved) break;
    }
    return {z, std::abs(value) < tol_abs && std::abs(z) < 1.0};
}

// Divide a Blaschke factor out of the boundary values and re-project. The
// pointwise ratio has unit modulus on the circle, so this preserves the
// discrete norm up to the truncation of the leaked negative frequencies.
AnalyticFrame divide_blaschke_factor(const AnalyticFrame& f, Complex root) {
    const std::size_t length = f.size();
    const auto nodes = unit_circle_nodes(length);
    const auto boundary = f.boundary();
    std::vector<Complex> next(length);
    const Complex rc = std::conj(root);
    for (std::size_t k = 0; k < length; ++k) {
        next[k] = boundary[k] * (1.0 - rc * nodes[k]) / (nodes[k] - root);
    }
    return AnalyticFrame::project_boundary(next);
}

// Additive lift of the boundary modulus: f + 1e-6 max|f| e_{0.01}. A
// multiplicative tweak leaves the min/max modulus ratio unchanged, so the
// retry adds a nearly constant zero-free function instead.
AnalyticFrame perturb_frame(const AnalyticFrame& f) {
    const double scale = 1e-6 * max_boundary_abs(f);
    const AnalyticFrame kernel = evaluator_frame(Complex{0.01, 0.0}, f.size());
    std::vector<Complex> coeffs(f.coeffs().begin(), f.coeffs().end());
    const auto kc = kernel.coeffs();
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] += scale * kc[k];
    return AnalyticFrame::from_coeffs(std::move(coeffs), f.size());
}

}  // namespace

int count_zeros(const AnalyticFrame& f) {
    const auto boundary = f.boundary();
    double max_abs = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
    for (const Complex& v : boundary) {
        const double a = std::abs(v);
        max_abs = std::max(max_abs, a);
        min_abs = std::min(min_abs, a);
    }
    if (!(max_abs > 0.0) || min_abs <= kZeroFloorRatio * max_abs) {
        throw IllConditioned("boundary modulus too close to zero for winding count");
    }
    double phase_sum = 0.0;
    for (std::size_t k = 0; k < boundary.size(); ++k) {
        const Complex ratio = boundary[(k + 1) % boundary.size()] / boundary[k];
        phase_sum += std::arg(ratio);
    }
    const double winding = phase_sum / kTwoPi;
    const double nearest = std::round(winding);
    if (std::abs(winding - nearest) > 0.1) {
        throw IllConditioned("winding sum far from an integer");
    }
    if (nearest < 0.0) throw IllConditioned("negative winding number");
    return static_cast<int>(nearest);
}

ZeroExtraction extract_zeros(const AnalyticFrame& f, int m, const DiskGrid& grid, double delta) {
    if (m < 0) throw InvalidInput("zero count must be nonnegative");
    if (grid.points.empty()) throw InvalidInput("empty search grid");
    if (grid.r_max > 1.0 - delta + 1e-12) {
        throw InvalidInput("grid radius exceeds the 1 - delta search disk");
    }
    ZeroExtraction out{{}, {}, f};
    if (m == 0) return out;

    AnalyticFrame g = f;
    for (int j = 0; j < m; ++j) {
        // Grid argmin of |G_j|.
        Complex best_point = grid.points.front();
        double best_abs = std::numeric_limits<double>::infinity();
        for (const Complex& a : grid.points) {
            const double v = std::abs(evaluate_interior(g, a));
            if (v < best_abs) {
                best_abs = v;
                best_point = a;
            }
        }
        const double tol = 1e-8 * std::sqrt(g.energy());

        // Newton from the argmin, its lattice neighbours, and a few radial
        // pushes toward the rim for zeros outside the search radius.
        std::vector<Complex> starts{best_point};
        const double h = grid.resolution;
        starts.push_back(best_point + Complex{h, 0.0});
        starts.push_back(best_point - Complex{h, 0.0});
        starts.push_back(best_point + Complex{0.0, h});
        starts.push_back(best_point - Complex{0.0, h});
        if (std::abs(best_point) > 0.3) {
            const Complex dir = best_point / std::abs(best_point);
            starts.push_back(dir * 0.97);
            starts.push_back(dir * 0.99);
            starts.push_back(dir * 0.997);
        }
        NewtonOutcome refined;
        for (const Complex& s : starts) {
            if (std::abs(s) >= 1.0) continue;
            refined = refine_root(g, s, tol);
            if (refined.converged) break;
        }
        Complex root = refined.converged ? refined.root : best_point;
        out.roots.push_back(root);
        out.refined.push_back(refined.converged);
        g = divide_blaschke_factor(g, root);
    }

    int remaining = 0;
    try {
        remaining = count_zeros(g);
    } catch (const IllConditioned&) {
        throw FactorizationFailed("outer winding check is ill-conditioned after extraction");
    }
    if (remaining != 0) {
        throw FactorizationFailed("zero extraction left " + std::to_string(remaining) +
                                  " unremoved zeros");
    }
    out.outer = std::move(g);
    return out;
}

Selection maximal_select(const AnalyticFrame& outer, const DiskGrid& grid) {
    if (!(outer.energy() > 0.0)) throw InvalidInput("maximal selection needs a nonzero frame");
    if (grid.points.empty()) throw InvalidInput("empty search grid");
    Selection best;
    double best_obj = -1.0;
    double best_abs = 0.0;
    double best_arg = 0.0;
    Complex best_value{0.0, 0.0};
    for (const Complex& a : grid.points) {
        const Complex v = evaluate_interior(outer, a);
        const double w = 1.0 - std::norm(a);
        const double obj = w * std::norm(v);
        const double abs_a = std::abs(a);
        const double arg_a = std::arg(a);
        const bool better =
            obj > best_obj ||
            (obj == best_obj && (abs_a < best_abs || (abs_a == best_abs && arg_a < best_arg)));
        if (better) {
            best_obj = obj;
            best_abs = abs_a;
            best_arg = arg_a;
            best.a = a;
            best_value = v;
        }
    }
    best.c = std::sqrt(1.0 - std::norm(best.a)) * best_value;
    return best;
}

UnwindStep unwind_step(const AnalyticFrame& f, const DiskGrid& grid, double delta) {
    if (!(f.energy() > 0.0)) throw InvalidInput("unwind step needs a nonzero frame");

    AnalyticFrame current = f;
    int zeros = 0;
    try {
        zeros = count_zeros(current);
    } catch (const IllConditioned&) {
        current = perturb_frame(current);
        zeros = count_zeros(current);
    }
    if (zeros > kMaxZerosPerLevel) {
        throw FactorizationFailed("level has " + std::to_string(zeros) + " zeros, cap is " +
                                  std::to_string(kMaxZerosPerLevel));
    }

    ZeroExtraction extraction = extract_zeros(current, zeros, grid, delta);
    Selection sel = maximal_select(extraction.outer, grid);

    // Remainder: (O_n - c_n e_{a_n}) divided by the Blaschke factor at a_n.
    const AnalyticFrame kernel = evaluator_frame(sel.a, current.size());
    std::vector<Complex> coeffs(extraction.outer.coeffs().begin(),
                                extraction.outer.coeffs().end());
    const auto kc = kernel.coeffs();
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] -= sel.c * kc[k];
    const AnalyticFrame numerator = AnalyticFrame::from_coeffs(std::move(coeffs), current.size());
    AnalyticFrame next = divide_blaschke_factor(numerator, sel.a);

    UnwindStep step{LevelResult{sel.c, sel.a, std::move(extraction.roots), next.energy()},
                    std::move(next)};
    return step;
}

DecompositionRecord unwind(const RealFrame& frame, int n_levels, const DiskGrid& grid,
                           double delta) {
    if (n_levels < 1 || n_levels > 64) throw InvalidInput("level count must lie in [1, 64]");
    auto [fplus, c0] = hardy_project(frame);
    const double initial_energy = fplus.energy();
    if (!(initial_energy > 0.0)) throw FactorizationFailed("window has no energy to decompose");

    DecompositionRecord record;
    record.c0 = c0;
    record.window_len = frame.samples.size();

    AnalyticFrame current = std::move(fplus);
    for (int n = 0; n < n_levels; ++n) {
        UnwindStep step = unwind_step(current, grid, delta);
        record.levels.push_back(std::move(step.level));
        current = std::move(step.next);
        if (current.energy() < 1e-12 * initial_energy) break;
    }
    return record;
}

}  // namespace buafd
