#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gvar/core/partition.hpp"

namespace gvar {

/// A finite collection of disjoint nonempty atom sets.
///
/// Blocks are stored canonically: atoms ascending inside each block, blocks
/// ordered by their smallest atom. Block weights are not cached.
class Grouping {
public:
    using Block = std::vector<Index>;

    Grouping() = default;
    /// Validates disjointness and index range against atom_count, then canonicalizes.
    Grouping(std::vector<Block> blocks, Index atom_count);

    static Grouping finest(Index atom_count);
    static Grouping single_block(Index atom_count);

    const std::vector<Block>& blocks() const { return blocks_; }
    Index size() const { return static_cast<Index>(blocks_.size()); }
    Index atom_count() const { return atom_count_; }
    bool covering() const { return covering_; }

    /// block_of()[n] is the block holding atom n, or -1 when n is dropped.
    std::vector<Index> block_of() const;

    template <typename Scalar>
    Scalar block_weight(const BasicAtomPartition<Scalar>& space, Index b) const
    {
        return space.mass(blocks_[static_cast<std::size_t>(b)]);
    }

    friend bool operator==(const Grouping& a, const Grouping& b) { return a.blocks_ == b.blocks_; }

private:
    friend class GroupingEnumerator;
    std::vector<Block> blocks_;
    Index atom_count_ = 0;
    bool covering_ = false;
};

/// Search tie-break: fewer blocks first, then lexicographically smaller blocks.
bool precedes(const Grouping& a, const Grouping& b);

enum class GroupingFamily {
    all,        ///< arbitrary set partitions
    contiguous  ///< blocks are runs of consecutive atoms (interval partitions)
};

enum class Coverage {
    covering_only, ///< blocks exhaust the atoms
    any            ///< atoms may be left out (at least one block remains)
};

/// Largest atom count the enumerator accepts for the given family and coverage.
/// All covering: 12 (Bell(12) = 4,213,597); all partial: 11 (Bell(12) - 1
/// collections); contiguous covering: 20 (2^19); contiguous partial: 16.
Index grouping_cap(GroupingFamily family, Coverage coverage);

/// Number of groupings the enumerator yields (exact, 64-bit).
std::uint64_t grouping_count(Index atoms, GroupingFamily family, Coverage coverage);

/// Yields each grouping of {0..N-1} in the family exactly once, in a fixed order.
///
/// Internally a label per atom (-1 for dropped) is advanced like an odometer
/// under restricted-growth constraints, so the enumeration is lazy and can be
/// split by skipping.
class GroupingEnumerator {
public:
    GroupingEnumerator(Index atoms, GroupingFamily family, Coverage coverage);

    /// Writes the next grouping into out; returns false when exhausted.
    bool next(Grouping& out);
    std::optional<Grouping> next();

private:
    int first_label(std::size_t i) const;
    std::optional<int> next_label(std::size_t i, int current) const;
    int max_label_before(std::size_t i) const;
    bool advance();
    bool all_dropped() const;
    void emit(Grouping& out) const;

    Index atoms_;
    GroupingFamily family_;
    Coverage coverage_;
    std::vector<int> labels_;
    bool started_ = false;
    bool done_ = false;
};

/// Collects every grouping; convenient for small N.
std::vector<Grouping> enumerate_groupings(Index atoms, GroupingFamily family, Coverage coverage);

template <typename Visitor>
void for_each_grouping(Index atoms, GroupingFamily family, Coverage coverage, Visitor&& visit)
{
    GroupingEnumerator it(atoms, family, coverage);
    Grouping g;
    while (it.next(g)) visit(static_cast<const Grouping&>(g));
}

} // namespace gvar
