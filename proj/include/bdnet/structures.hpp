#pragma once

#include "bdnet/adjacency.hpp"
#include "bdnet/matrix_core.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bdnet::synth {

enum class StructureKind { AR1, AR2, Sparse80, Sparse40, ScaleFree, Band, Cluster, Star, Circle };

inline constexpr std::array<StructureKind, 9> kAllStructures = {
    StructureKind::AR1,       StructureKind::AR2,  StructureKind::Sparse80,
    StructureKind::Sparse40,  StructureKind::ScaleFree, StructureKind::Band,
    StructureKind::Cluster,   StructureKind::Star, StructureKind::Circle};

/// Short names: ar1, ar2, sparse80, sparse40, scalefree, band, cluster, star, circle.
std::string_view to_string(StructureKind kind);
StructureKind parse_structure(std::string_view name);

/// Structure number 1..9 in the order above.
int structure_number(StructureKind kind);

bool is_random(StructureKind kind);

struct StructureSpec {
    StructureKind kind = StructureKind::AR1;
    Index dim = 10;
    std::optional<std::uint64_t> seed; ///< required for the random kinds

    double repair_margin = 0.05;  ///< relative to the largest diagonal entry
    double scale_free_multiplier = 2.0;
    double scale_free_weight = 0.3;

    void validate() const;
};

inline constexpr double kSupportTolerance = 1e-10;

struct ModelPair {
    SymMatrix raw_theta1; ///< entries as specified, before PD repair
    SymMatrix raw_theta2;
    SymMatrix theta1;
    SymMatrix theta2;
    SymMatrix true_delta; ///< theta2 - theta1
    AdjacencyMatrix true_adjacency;
};

ModelPair make_structure(const StructureSpec& spec);

/// If the smallest eigenvalue is <= margin, shifts the diagonal so it equals
/// margin; otherwise returns m unchanged.
SymMatrix pd_repair(const SymMatrix& m, double margin);

/// Support of a matrix's off-diagonal at the given absolute tolerance.
AdjacencyMatrix support(const SymMatrix& m, double tol = kSupportTolerance);

/// n rows drawn i.i.d. from N(0, theta^-1).
Matrix sample_gaussian(const SymMatrix& theta, std::size_t n, std::uint64_t seed);

} // namespace bdnet::synth
