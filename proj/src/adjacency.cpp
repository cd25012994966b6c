#include "bdnet/adjacency.hpp"

#include <stdexcept>

namespace bdnet {

AdjacencyMatrix::AdjacencyMatrix(Index dim)
    : dim_(dim), bits_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0)
{
    if (dim < 1) throw std::invalid_argument("AdjacencyMatrix dimension must be positive");
}

AdjacencyMatrix AdjacencyMatrix::complete(Index dim)
{
    AdjacencyMatrix a(dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = i + 1; j < dim; ++j) a.set(i, j, true);
    }
    return a;
}

void AdjacencyMatrix::set(Index i, Index j, bool edge)
{
    if (i == j) return;
    const unsigned char v = edge ? 1 : 0;
    bits_[offset(i, j)] = v;
    bits_[offset(j, i)] = v;
}

std::size_t AdjacencyMatrix::edge_count() const
{
    std::size_t c = 0;
    for (Index i = 0; i < dim_; ++i) {
        for (Index j = i + 1; j < dim_; ++j) c += (*this)(i, j) ? 1 : 0;
    }
    return c;
}

std::vector<std::pair<Index, Index>> AdjacencyMatrix::edges() const
{
    std::vector<std::pair<Index, Index>> out;
    for (Index i = 0; i < dim_; ++i) {
        for (Index j = i + 1; j < dim_; ++j) {
            if ((*this)(i, j)) out.emplace_back(i, j);
        }
    }
    return out;
}

} // namespace bdnet
