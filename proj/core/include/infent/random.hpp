#pragma once

// Seeded generators for the randomized checks and sweeps. All draws go
// through std::mt19937_64 so a seed fully determines the output on a given
// toolchain.

#include <cstdint>
#include <random>

#include "infent/operator.hpp"

namespace infent {

using Rng = std::mt19937_64;

/// Entries i.i.d. complex standard normal.
Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
LinearOperator random_unitary(std::size_t d, Rng& rng);
/// GUE-like Hermitian matrix.
LinearOperator random_hermitian(std::size_t d, Rng& rng);
/// Hermitian with spectrum in [-1, 1] (scaled by its operator norm).
LinearOperator random_hermitian_contraction(std::size_t d, Rng& rng);
/// Uniform unit vector.
Vector random_unit_vector(std::size_t d, Rng& rng);
/// Random density matrix of full rank (Ginibre ensemble).
LinearOperator random_density(std::size_t d, Rng& rng);
/// |phi (x) psi><phi (x) psi| on dims [da, db].
LinearOperator random_product_pure(std::size_t da, std::size_t db, Rng& rng);
/// Convex mixture of `terms` random product pure states on [da, db].
LinearOperator random_separable(std::size_t da, std::size_t db, std::size_t terms, Rng& rng);

}  // namespace infent
