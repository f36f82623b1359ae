#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qkgp/error.hpp"
#include "qkgp/gram_io.hpp"
#include "qkgp/kernels.hpp"
#include "qkgp/pauli.hpp"
#include "qkgp/seed.hpp"

namespace qkgp::kernels {

GramMatrix gram(const Kernel& kernel, const Hyperparams& hp, const Points& x) {
    if (x.rows() == 0) throw InvalidArgument("Gram matrix of an empty point set");
    GramMatrix g;
    const Eigen::Index n = x.rows();
    if (kernel.spec().family == Family::ExternalGram) {
        kernel.check(hp);
        g.values = kernel.external_block(hp, x, x);
        g.provenance = kernel.spec().external->provenance;
        return g;
    }
    if (x.cols() != kernel.spec().dims) throw DimensionMismatch("point dimension does not match the kernel");
    kernel.check(hp);
    g.values.resize(n, n);
    const auto dims = static_cast<std::size_t>(x.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::span<const double> xi(x.row(i).data(), dims);
        g.values(i, i) = kernel(hp, xi, xi);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = kernel(hp, xi, std::span<const double>(x.row(j).data(), dims));
            g.values(i, j) = v;
            g.values(j, i) = v;
        }
    }
    g.provenance = Provenance::Simulated;
    return g;
}

Eigen::MatrixXd cross_gram(const Kernel& kernel, const Hyperparams& hp, const Points& xstar, const Points& x) {
    if (kernel.spec().family == Family::ExternalGram) {
        kernel.check(hp);
        return kernel.external_block(hp, xstar, x);
    }
    const int dims = kernel.spec().dims;
    if (xstar.cols() != dims || x.cols() != dims) throw DimensionMismatch("point dimension does not match the kernel");
    kernel.check(hp);
    Eigen::MatrixXd out(xstar.rows(), x.rows());
    const auto d = static_cast<std::size_t>(dims);
    for (Eigen::Index i = 0; i < xstar.rows(); ++i) {
        const std::span<const double> xi(xstar.row(i).data(), d);
        for (Eigen::Index j = 0; j < x.rows(); ++j) out(i, j) = kernel(hp, xi, std::span<const double>(x.row(j).data(), d));
    }
    return out;
}

GramMatrix symmetrize(const GramMatrix& g) {
    if (g.values.rows() != g.values.cols()) throw InvalidArgument("cannot symmetrize a non-square matrix");
    GramMatrix out;
    out.values = 0.5 * (g.values + g.values.transpose());
    out.provenance = g.provenance;
    return out;
}

GramMatrix emulate_hardware_gram(const GramMatrix& g, double s, const HardwareNoise& noise, std::uint64_t seed) {
    if (g.values.rows() != g.values.cols()) throw InvalidArgument("hardware emulation needs a square Gram");
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("prefactor s must be positive");
    if (!(noise.floor_rate >= 0.0 && noise.floor_rate <= 1.0)) throw InvalidArgument("floor_rate must lie in [0, 1]");
    if (!(noise.background >= 0.0 && noise.background <= 1.0)) throw InvalidArgument("background must lie in [0, 1]");
    const Eigen::Index n = g.values.rows();
    GramMatrix raw;
    raw.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double p = g.values(i, j) / s;
            if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) throw InvalidArgument("Gram entry outside [0, s]");
            p = std::clamp(p, 0.0, 1.0);
            const auto index = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(j);
            const double sampled = pauli::shot_estimate(p, noise.shots, derive_seed(seed, streams::hardware, index));
            raw.values(i, j) = s * ((1.0 - noise.floor_rate) * sampled + noise.floor_rate * noise.background);
        }
    }
    GramMatrix out = symmetrize(raw);
    out.provenance = Provenance::ShotEmulated;
    return out;
}

// I/O --------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& gram_path) {
    auto p = gram_path;
    p.replace_extension(".json");
    return p;
}

void save_gram(const GramMatrix& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.values.cols(); ++j) {
            if (j) out << ',';
            out << format_double(g.values(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void save_gram(const GramMatrix& g, const std::filesystem::path& path, const GramSidecar& sidecar) {
    save_gram(g, path);
    nlohmann::json hp = {{"s", sidecar.hyperparams.s},
                         {"c", sidecar.hyperparams.c},
                         {"d", sidecar.hyperparams.d},
                         {"sigma_d", sidecar.hyperparams.sigma_d}};
    const nlohmann::json meta = {{"n", g.size()},
                                 {"provenance", to_string(g.provenance)},
                                 {"s", sidecar.s},
                                 {"family", sidecar.family},
                                 {"hyperparams", hp}};
    const auto meta_path = sidecar_path(path);
    std::ofstream out(meta_path);
    if (!out) throw IoError("cannot open " + meta_path.string() + " for writing");
    out << meta.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + meta_path.string());
}

GramMatrix load_gram(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            const auto first = cell.find_first_not_of(" \t");
            const auto last = cell.find_last_not_of(" \t");
            if (first == std::string::npos) throw IoError(path.string() + ":" + std::to_string(line_no) + ": empty cell");
            const char* begin = cell.data() + first;
            const char* end = cell.data() + last + 1;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc{} || ptr != end) {
                throw IoError(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path.string() + ": empty Gram file");
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (static_cast<Eigen::Index>(rows.front().size()) != n) {
        throw IoError(path.string() + ": Gram is not square (" + std::to_string(n) + " rows, " +
                      std::to_string(rows.front().size()) + " columns)");
    }
    GramMatrix g;
    g.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) g.values(i, j) = rows[i][j];
    }
    g.provenance = Provenance::Ingested;
    return g;
}

}  // namespace qkgp::kernels
