#pragma once

// Gram matrix files: plain comma-separated decimal text, one row per line,
// no header, 17 significant digits so a save/load round trip is exact.

#include <filesystem>
#include <string>

#include "qkgp/kernels.hpp"

namespace qkgp::kernels {

/// Metadata written as a JSON sidecar next to a saved Gram.
struct GramSidecar {
    double s = 1.0;
    std::string family;
    Hyperparams hyperparams;
};

/// Writes values only. Throws IoError.
void save_gram(const GramMatrix& g, const std::filesystem::path& path);

/// Writes values and `path` with its extension replaced by ".json".
void save_gram(const GramMatrix& g, const std::filesystem::path& path, const GramSidecar& sidecar);

std::filesystem::path sidecar_path(const std::filesystem::path& gram_path);

/// Provenance of the result is Ingested. Throws IoError on unreadable,
/// ragged, non-numeric or non-square input.
GramMatrix load_gram(const std::filesystem::path& path);

}  // namespace qkgp::kernels
