#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "css/dense_core.hpp"

namespace css {

// Synthetic matrix description. All generators normalize the final matrix to
// ||M||_F = 1 and are deterministic per seed.
struct SyntheticSpec {
  Index n1 = 50;
  Index n2 = 50;
  Index k = 0;          // intrinsic rank; 0 = full-rank Gaussian
  double sigma = 0.0;   // noise-to-signal ratio
  Index repeated = 0;   // duplicated coherent columns (gen_coherent)
  double scale = 10.0;  // duplication amplification
  std::uint64_t seed = 0;
};

struct GeneratedMatrix {
  Matrix m;                // normalized
  double noise_fro = 0.0;  // ||R||_F after normalization
  double signal_fro = 0.0; // ||low-rank part||_F after normalization
};

// Low-rank plus noise: A = B B^T (or B1 B2^T when n1 != n2), noise entries
// N(0, sigma^2 ||A||_F^2 / (n1 n2)) so sigma reads as a noise-to-signal
// ratio, then the sum is normalized. k = 0 gives a plain Gaussian matrix.
Matrix gen_lowrank_noise(const SyntheticSpec& spec);
GeneratedMatrix gen_lowrank_noise_parts(const SyntheticSpec& spec);

// Coherent-columns design: a uniformly chosen column is scaled by `scale` and
// written over `repeated` uniformly chosen distinct positions before
// normalization.
Matrix gen_coherent(const SyntheticSpec& spec);

// Text file of {-1, 0, 1} rows, whitespace separated, no header.
Matrix load_sign_matrix(const std::string& path);

// Genotype grid to sign matrix: per column, B1/B2 are the first two distinct
// bases seen top-down; b1b2 = B1B1 -> -1, B2B2 -> +1, anything else -> 0.
Matrix encode_sign(const std::vector<std::vector<std::string>>& genotypes);

// Greedy left-to-right split into contiguous windows such that every window
// wider than k keeps its rank-k SVD residual ratio within eps. Returns
// [begin, end) column ranges covering all columns.
std::vector<std::pair<Index, Index>> split_windows(const Matrix& m, Index k, double eps);

// PGM (P2 ascii / P5 binary, maxval <= 255) to a matrix in [0, 1]; the
// experiment harness applies Frobenius normalization downstream.
Matrix load_grayscale(const std::string& path);

// Dense matrix text format: first line "n1 n2", then n1 whitespace-separated
// rows.
Matrix load_dense_text(const std::string& path);
void save_dense_text(const Matrix& m, const std::string& path);

}  // namespace css
