#pragma once

#include "bdnet/matrix_core.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace bdnet {

/// Symmetric boolean edge indicator with an empty diagonal.
class AdjacencyMatrix {
public:
    AdjacencyMatrix() = default;
    explicit AdjacencyMatrix(Index dim);

    static AdjacencyMatrix complete(Index dim);

    Index dim() const noexcept { return dim_; }
    bool operator()(Index i, Index j) const { return bits_[offset(i, j)] != 0; }

    /// Ignores writes to the diagonal.
    void set(Index i, Index j, bool edge);

    std::size_t edge_count() const;
    std::vector<std::pair<Index, Index>> edges() const; ///< (i, j) with i < j

    bool operator==(const AdjacencyMatrix& o) const = default;

private:
    std::size_t offset(Index i, Index j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
               static_cast<std::size_t>(j);
    }

    Index dim_ = 0;
    std::vector<unsigned char> bits_;
};

} // namespace bdnet
