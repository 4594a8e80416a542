#include "gvar/core/grouping.hpp"

#include <algorithm>
#include <string>

#include "gvar/errors.hpp"

namespace gvar {

Grouping::Grouping(std::vector<Block> blocks, Index atom_count)
    : blocks_(std::move(blocks)), atom_count_(atom_count)
{
    if (atom_count_ < 1) throw ValidationError("grouping needs at least one atom");
    std::vector<bool> used(static_cast<std::size_t>(atom_count_), false);
    Index covered = 0;
    for (auto& block : blocks_) {
        if (block.empty()) throw ValidationError("grouping blocks must be nonempty");
        std::sort(block.begin(), block.end());
        for (Index n : block) {
            if (n < 0 || n >= atom_count_)
                throw ValidationError("grouping atom " + std::to_string(n) + " out of range");
            if (used[static_cast<std::size_t>(n)])
                throw ValidationError("grouping blocks must be disjoint (atom " +
                                      std::to_string(n) + " repeated)");
            used[static_cast<std::size_t>(n)] = true;
            ++covered;
        }
    }
    if (blocks_.empty()) throw ValidationError("grouping needs at least one block");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const Block& a, const Block& b) { return a.front() < b.front(); });
    covering_ = covered == atom_count_;
}

Grouping Grouping::finest(Index atom_count)
{
    std::vector<Block> blocks;
    for (Index n = 0; n < atom_count; ++n) blocks.push_back({n});
    return {std::move(blocks), atom_count};
}

Grouping Grouping::single_block(Index atom_count)
{
    Block all(static_cast<std::size_t>(atom_count));
    for (Index n = 0; n < atom_count; ++n) all[static_cast<std::size_t>(n)] = n;
    return {{std::move(all)}, atom_count};
}

std::vector<Index> Grouping::block_of() const
{
    std::vector<Index> owner(static_cast<std::size_t>(atom_count_), -1);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (Index n : blocks_[b]) owner[static_cast<std::size_t>(n)] = static_cast<Index>(b);
    return owner;
}

bool precedes(const Grouping& a, const Grouping& b)
{
    if (a.size() != b.size()) return a.size() < b.size();
    return a.blocks() < b.blocks();
}

Index grouping_cap(GroupingFamily family, Coverage coverage)
{
    if (family == GroupingFamily::all) return coverage == Coverage::covering_only ? 12 : 11;
    return coverage == Coverage::covering_only ? 20 : 16;
}

namespace {

std::uint64_t bell(Index n)
{
    // Bell triangle
    std::vector<std::uint64_t> row{1};
    for (Index i = 0; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

void check_cap(Index atoms, GroupingFamily family, Coverage coverage)
{
    if (atoms < 1) throw ValidationError("grouping enumeration needs at least one atom");
    const Index cap = grouping_cap(family, coverage);
    if (atoms > cap) {
        const std::string family_name = family == GroupingFamily::all ? "all" : "contiguous";
        const std::string coverage_name =
            coverage == Coverage::covering_only ? "covering" : "partial";
        std::string bound = family == GroupingFamily::all
                                ? "Bell(" + std::to_string(cap + (coverage == Coverage::any)) + ")"
                                : "N <= " + std::to_string(cap);
        throw SizeLimitError("grouping enumeration (" + family_name + ", " + coverage_name +
                                 ") capped at N = " + std::to_string(cap) + " [" + bound +
                                 "]; got N = " + std::to_string(atoms),
                             static_cast<std::size_t>(cap));
    }
}

} // namespace

std::uint64_t grouping_count(Index atoms, GroupingFamily family, Coverage coverage)
{
    if (family == GroupingFamily::all)
        return coverage == Coverage::covering_only ? bell(atoms) : bell(atoms + 1) - 1;
    if (coverage == Coverage::covering_only) return std::uint64_t{1} << (atoms - 1);
    std::uint64_t dropped = 1, open = 0;
    for (Index i = 0; i < atoms; ++i) {
        const std::uint64_t d = dropped + open;
        const std::uint64_t o = dropped + 2 * open;
        dropped = d;
        open = o;
    }
    return dropped + open - 1;
}

GroupingEnumerator::GroupingEnumerator(Index atoms, GroupingFamily family, Coverage coverage)
    : atoms_(atoms), family_(family), coverage_(coverage),
      labels_(static_cast<std::size_t>(atoms), -1)
{
    check_cap(atoms, family, coverage);
}

int GroupingEnumerator::max_label_before(std::size_t i) const
{
    int m = -1;
    for (std::size_t j = 0; j < i; ++j) m = std::max(m, labels_[j]);
    return m;
}

int GroupingEnumerator::first_label(std::size_t i) const
{
    if (coverage_ == Coverage::any) return -1;
    if (family_ == GroupingFamily::contiguous && i > 0) return labels_[i - 1];
    return 0;
}

std::optional<int> GroupingEnumerator::next_label(std::size_t i, int current) const
{
    const int fresh = max_label_before(i) + 1;
    if (family_ == GroupingFamily::all) {
        if (current < fresh) return current + 1;
        return std::nullopt;
    }
    // contiguous: dropped (-1), continue the previous block, or open a new one
    const int previous = i > 0 ? labels_[i - 1] : -1;
    if (current == -1) {
        if (previous >= 0) return previous;
        return fresh;
    }
    if (current == previous && previous >= 0 && previous != fresh) return fresh;
    return std::nullopt;
}

bool GroupingEnumerator::all_dropped() const
{
    return std::all_of(labels_.begin(), labels_.end(), [](int l) { return l < 0; });
}

bool GroupingEnumerator::advance()
{
    for (std::size_t i = labels_.size(); i-- > 0;) {
        if (auto v = next_label(i, labels_[i])) {
            labels_[i] = *v;
            for (std::size_t j = i + 1; j < labels_.size(); ++j) labels_[j] = first_label(j);
            return true;
        }
    }
    return false;
}

void GroupingEnumerator::emit(Grouping& out) const
{
    const int count = max_label_before(labels_.size()) + 1;
    out.blocks_.assign(static_cast<std::size_t>(count), {});
    Index covered = 0;
    for (std::size_t n = 0; n < labels_.size(); ++n) {
        if (labels_[n] < 0) continue;
        out.blocks_[static_cast<std::size_t>(labels_[n])].push_back(static_cast<Index>(n));
        ++covered;
    }
    out.atom_count_ = atoms_;
    out.covering_ = covered == atoms_;
}

bool GroupingEnumerator::next(Grouping& out)
{
    if (done_) return false;
    if (!started_) {
        started_ = true;
        for (std::size_t j = 0; j < labels_.size(); ++j) labels_[j] = first_label(j);
    } else if (!advance()) {
        done_ = true;
        return false;
    }
    while (all_dropped()) {
        if (!advance()) {
            done_ = true;
            return false;
        }
    }
    emit(out);
    return true;
}

std::optional<Grouping> GroupingEnumerator::next()
{
    Grouping g;
    if (next(g)) return g;
    return std::nullopt;
}

std::vector<Grouping> enumerate_groupings(Index atoms, GroupingFamily family, Coverage coverage)
{
    std::vector<Grouping> out;
    for_each_grouping(atoms, family, coverage, [&](const Grouping& g) { out.push_back(g); });
    return out;
}

} // namespace gvar
