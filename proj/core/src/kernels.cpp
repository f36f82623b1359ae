#include "qkgp/kernels.hpp"

#include <charconv>
#include <cmath>

#include "qkgp/error.hpp"

namespace qkgp::kernels {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr int kMaxSeriesIndex = 20;

// Displacement differences beyond this have exp(-delta^2/2) == 0 in double.
constexpr double kOverlapCutoff2 = 1500.0;

// sqrt(k!) for k = 0..20.
const std::array<double, kMaxSeriesIndex + 1>& root_factorials() {
    static const auto table = [] {
        std::array<double, kMaxSeriesIndex + 1> t{};
        t[0] = 1.0;
        for (int k = 1; k <= kMaxSeriesIndex; ++k) t[k] = t[k - 1] * std::sqrt(static_cast<double>(k));
        return t;
    }();
    return table;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int parse_int(std::string_view text, std::string_view label) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw InvalidArgument("malformed kernel label '" + std::string(label) + "'");
    return value;
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive and finite");
}

}  // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Simulated: return "simulated";
        case Provenance::Ingested: return "ingested";
        case Provenance::ShotEmulated: return "shot_emulated";
    }
    return "unknown";
}

Provenance provenance_from_string(std::string_view text) {
    if (text == "simulated") return Provenance::Simulated;
    if (text == "ingested") return Provenance::Ingested;
    if (text == "shot_emulated") return Provenance::ShotEmulated;
    throw InvalidArgument("unknown provenance '" + std::string(text) + "'");
}

KernelSpec KernelSpec::analytic(int dims) {
    KernelSpec s;
    s.family = Family::AnalyticCoherent;
    s.dims = dims;
    return s;
}

KernelSpec KernelSpec::finite(int dims, int levels) {
    KernelSpec s;
    s.family = Family::FiniteCoherent;
    s.dims = dims;
    s.levels = levels;
    return s;
}

KernelSpec KernelSpec::qubit(int dims, int levels, int steps) {
    KernelSpec s;
    s.family = Family::QubitTrotter;
    s.dims = dims;
    s.levels = levels;
    s.steps = steps;
    return s;
}

KernelSpec KernelSpec::squeezed(int series_cap) {
    KernelSpec s;
    s.family = Family::Squeezed;
    s.dims = 3;
    s.series_cap = series_cap;
    return s;
}

KernelSpec KernelSpec::external_gram(GramMatrix unit_gram) {
    KernelSpec s;
    s.family = Family::ExternalGram;
    s.dims = 1;
    s.external = std::make_shared<const GramMatrix>(std::move(unit_gram));
    return s;
}

void KernelSpec::validate() const {
    if (dims < 1) throw InvalidArgument("kernel needs at least one data dimension");
    switch (family) {
        case Family::AnalyticCoherent: break;
        case Family::FiniteCoherent:
            if (levels < 2) throw InvalidTruncation("finite coherent kernel needs N >= 2");
            break;
        case Family::QubitTrotter:
            if (levels < 2 || levels > 64 || !is_power_of_two(levels)) {
                throw InvalidTruncation("qubit kernel needs a power-of-two N in [2, 64]");
            }
            if (steps < 1) throw InvalidArgument("qubit kernel needs at least one Trotter step");
            break;
        case Family::Squeezed:
            if (dims != 3) throw InvalidArgument("squeezed kernel is defined for 3-D inputs only");
            if (series_cap < 1 || series_cap > kMaxSeriesIndex) {
                throw InvalidArgument("squeezed series cap must lie in [1, 20]");
            }
            break;
        case Family::ExternalGram:
            if (!external || external->size() == 0) throw InvalidArgument("external Gram kernel has no matrix");
            if (external->values.rows() != external->values.cols()) {
                throw InvalidArgument("external Gram must be square");
            }
            break;
    }
}

KernelSpec parse_kernel(std::string_view text, int dims) {
    KernelSpec spec;
    if (text == "coherent") {
        spec = KernelSpec::analytic(dims);
    } else if (text == "squeezed") {
        spec = KernelSpec::squeezed();
    } else if (text.starts_with("squeezed-cap")) {
        spec = KernelSpec::squeezed(parse_int(text.substr(12), text));
    } else if (text.starts_with("CQ-")) {
        const auto rest = text.substr(3);
        const auto dash = rest.find("-t");
        if (dash == std::string_view::npos) throw InvalidArgument("malformed kernel label '" + std::string(text) + "'");
        spec = KernelSpec::qubit(dims, parse_int(rest.substr(0, dash), text), parse_int(rest.substr(dash + 2), text));
    } else if (text.starts_with("C-")) {
        spec = KernelSpec::finite(dims, parse_int(text.substr(2), text));
    } else {
        throw InvalidArgument("unknown kernel '" + std::string(text) + "'");
    }
    if (spec.family == Family::Squeezed && dims != 3) {
        throw InvalidArgument("squeezed kernel is defined for 3-D inputs only");
    }
    spec.validate();
    return spec;
}

std::string label(const KernelSpec& spec) {
    switch (spec.family) {
        case Family::AnalyticCoherent: return "coherent";
        case Family::FiniteCoherent: return "C-" + std::to_string(spec.levels);
        case Family::QubitTrotter: return "CQ-" + std::to_string(spec.levels) + "-t" + std::to_string(spec.steps);
        case Family::Squeezed:
            return spec.series_cap == 8 ? "squeezed" : "squeezed-cap" + std::to_string(spec.series_cap);
        case Family::ExternalGram: return "external";
    }
    return "unknown";
}

// Per-dimension factors --------------------------------------------------------

double dim_kernel_analytic(double x, double xp, double c) {
    check_positive(c, "length scale c");
    const double d = x - xp;
    return std::exp(-d * d / (2.0 * c * c));
}

double dim_kernel_finite(double x, double xp, double c, int levels) {
    return Kernel(KernelSpec::finite(1, levels)).dim_factor(x - xp, c);
}

double dim_kernel_qubit(double x, double xp, double c, int levels, int steps) {
    return Kernel(KernelSpec::qubit(1, levels, steps)).dim_factor(x - xp, c);
}

Eigen::MatrixXd displaced_number_overlaps(double delta, int cap) {
    if (cap < 0 || cap > kMaxSeriesIndex) throw InvalidArgument("series index must lie in [0, 20]");
    const int size = cap + 1;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size, size);
    const double x = delta * delta;
    if (!std::isfinite(x)) throw NumericError("displacement difference must be finite");
    if (x > kOverlapCutoff2) return out;
    const double envelope = std::exp(-0.5 * x);

    std::vector<double> laguerre(size);
    for (int k = 0; k < size; ++k) {
        // Generalised Laguerre L_j^{(k)}(x), j = 0..cap-k, by the three-term recurrence.
        const int jmax = cap - k;
        laguerre[0] = 1.0;
        if (jmax >= 1) laguerre[1] = 1.0 + k - x;
        for (int j = 1; j < jmax; ++j) {
            laguerre[j + 1] = ((2.0 * j + 1.0 + k - x) * laguerre[j] - (j + k) * laguerre[j - 1]) / (j + 1.0);
        }
        const double up = std::pow(delta, k);         // n >= m: (alpha' - alpha)^{n-m}
        const double down = std::pow(-delta, k);      // n <  m: (alpha - alpha')^{m-n}
        for (int j = 0; j <= jmax; ++j) {
            const double ratio = root_factorials()[j] / root_factorials()[j + k];  // sqrt(j! / (j+k)!)
            const double base = envelope * ratio * laguerre[j];
            out(j, j + k) = base * up;
            if (k > 0) out(j + k, j) = base * down;
        }
    }
    return out;
}

double displaced_number_overlap(int m, double alpha_p, int n, double alpha) {
    if (m < 0 || n < 0 || m > kMaxSeriesIndex || n > kMaxSeriesIndex) {
        throw InvalidArgument("displaced number overlap indices must lie in [0, 20]");
    }
    return displaced_number_overlaps(alpha_p - alpha, std::max(m, n))(m, n);
}

namespace {

// |sum_{n,m} t^n t'^m Oi(m,n) Oj(m,n)| / (cosh g cosh g'), t = -tanh g.
double pair_series(const Eigen::MatrixXd& oi, const Eigen::MatrixXd& oj, double gamma, double gamma_p, int cap) {
    const double t = -std::tanh(gamma);
    const double tp = -std::tanh(gamma_p);
    double sum = 0.0;
    double tn = 1.0;
    for (int n = 0; n <= cap; ++n) {
        double tm = 1.0;
        double row = 0.0;
        for (int m = 0; m <= cap; ++m) {
            row += tm * oi(m, n) * oj(m, n);
            tm *= tp;
        }
        sum += tn * row;
        tn *= t;
    }
    return std::abs(sum) / (std::cosh(gamma) * std::cosh(gamma_p));
}

}  // namespace

double squeezed_pair_kernel(const SqueezedPairPoint& p, double ci, double cj, double dij, int cap, GammaMode mode,
                            bool* out_of_range) {
    check_positive(ci, "length scale c_i");
    check_positive(cj, "length scale c_j");
    if (cap < 1 || cap > kMaxSeriesIndex) throw InvalidArgument("squeezed series cap must lie in [1, 20]");
    const double gamma = mode == GammaMode::DataDependent ? p.xi * p.xj * dij : dij;
    const double gamma_p = mode == GammaMode::DataDependent ? p.xpi * p.xpj * dij : dij;
    if (out_of_range) *out_of_range = std::abs(gamma) >= 2.0 || std::abs(gamma_p) >= 2.0;
    const double scale_i = kInvSqrt2 / ci;
    const double scale_j = kInvSqrt2 / cj;
    const Eigen::MatrixXd oi = displaced_number_overlaps((p.xpi - p.xi) * scale_i, cap);
    const Eigen::MatrixXd oj = displaced_number_overlaps((p.xpj - p.xj) * scale_j, cap);
    return pair_series(oi, oj, gamma, gamma_p, cap);
}

// Kernel ---------------------------------------------------------------------------

Kernel::Kernel(KernelSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.family == Family::FiniteCoherent) spectrum_.emplace(spec_.levels);
    if (spec_.family == Family::QubitTrotter) circuit_.emplace(pauli::cached_decomposition(spec_.levels));
}

void Kernel::check(const Hyperparams& hp) const {
    if (!(hp.s >= 0.0) || !std::isfinite(hp.s)) throw InvalidArgument("scale s must be non-negative and finite");
    if (spec_.family == Family::ExternalGram) return;
    if (static_cast<int>(hp.c.size()) != spec_.dims) {
        throw DimensionMismatch("expected " + std::to_string(spec_.dims) + " length scales, got " +
                                std::to_string(hp.c.size()));
    }
    for (double c : hp.c) check_positive(c, "length scale c");
    if (spec_.family == Family::Squeezed) {
        if (hp.d.size() != squeezed_pairs.size()) throw DimensionMismatch("squeezed kernel needs 3 couplings d_ij");
        for (double d : hp.d) {
            if (!std::isfinite(d)) throw InvalidArgument("squeezing coupling must be finite");
        }
    }
}

double Kernel::dim_factor(double delta, double c) const {
    check_positive(c, "length scale c");
    switch (spec_.family) {
        case Family::AnalyticCoherent:
        case Family::Squeezed: return std::exp(-delta * delta / (2.0 * c * c));
        case Family::FiniteCoherent: {
            const double amp = spectrum_->vacuum_amplitude(delta * kInvSqrt2 / c);
            return amp * amp;
        }
        case Family::QubitTrotter: return circuit_->echo_probability(delta * kInvSqrt2 / c, spec_.steps);
        case Family::ExternalGram: break;
    }
    throw InvalidArgument("external Gram kernel supports Gram evaluation only");
}

double Kernel::squeezed(const Hyperparams& hp, std::span<const double> x, std::span<const double> xp) const {
    const int cap = spec_.series_cap;
    std::array<Eigen::MatrixXd, 3> tables;
    for (int i = 0; i < 3; ++i) tables[i] = displaced_number_overlaps((xp[i] - x[i]) * kInvSqrt2 / hp.c[i], cap);
    double value = hp.s;
    for (std::size_t p = 0; p < squeezed_pairs.size(); ++p) {
        const auto [i, j] = squeezed_pairs[p];
        const double d = hp.d[p];
        const bool data = spec_.gamma_mode == GammaMode::DataDependent;
        const double gamma = data ? x[i] * x[j] * d : d;
        const double gamma_p = data ? xp[i] * xp[j] * d : d;
        value *= pair_series(tables[i], tables[j], gamma, gamma_p, cap);
    }
    return value;
}

double Kernel::operator()(const Hyperparams& hp, std::span<const double> x, std::span<const double> xp) const {
    if (spec_.family == Family::ExternalGram) {
        throw InvalidArgument("external Gram kernel supports Gram evaluation only");
    }
    if (static_cast<int>(x.size()) != spec_.dims || static_cast<int>(xp.size()) != spec_.dims) {
        throw DimensionMismatch("point dimension does not match kernel dimension " + std::to_string(spec_.dims));
    }
    check(hp);
    if (spec_.family == Family::Squeezed) return squeezed(hp, x, xp);
    double value = hp.s;
    for (int i = 0; i < spec_.dims; ++i) value *= dim_factor(x[i] - xp[i], hp.c[i]);
    return value;
}

Eigen::MatrixXd Kernel::external_block(const Hyperparams& hp, const Points& rows, const Points& cols) const {
    const auto& g = spec_.external->values;
    auto index = [&](const Points& p, Eigen::Index r) {
        if (p.cols() != 1) throw DimensionMismatch("external Gram points must be single index columns");
        const double v = p(r, 0);
        const auto i = static_cast<Eigen::Index>(std::llround(v));
        if (static_cast<double>(i) != v || i < 0 || i >= g.rows()) {
            throw InvalidArgument("external Gram index out of range");
        }
        return i;
    };
    Eigen::MatrixXd out(rows.rows(), cols.rows());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        const auto i = index(rows, r);
        for (Eigen::Index c = 0; c < cols.rows(); ++c) out(r, c) = hp.s * g(i, index(cols, c));
    }
    return out;
}

double eval_kernel(const KernelSpec& spec, const Hyperparams& hp, std::span<const double> x,
                   std::span<const double> xp) {
    return Kernel(spec)(hp, x, xp);
}

}  // namespace qkgp::kernels
