#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teinv/errors.hpp"

namespace teinv {

using Index = std::int64_t;

// Shape of a dense tensor whose modes are partitioned into a row block and a
// column block: extents[0..split) index rows of the flattened matrix, extents
// [split..n) index its columns.  Flattened sizes are the products of each
// block (empty blocks flatten to size 1).
class Shape {
public:
    Shape(std::vector<Index> extents, std::size_t split);

    const std::vector<Index>& extents() const { return extents_; }
    std::size_t split() const { return split_; }
    std::size_t order() const { return extents_.size(); }

    std::vector<Index> row_extents() const;
    std::vector<Index> col_extents() const;

    // Flattened row count (product of the extents before the split).
    Index row_size() const { return row_size_; }
    // Flattened column count (product of the extents after the split).
    Index col_size() const { return col_size_; }
    Index entry_count() const { return row_size_ * col_size_; }

    // Shape with the row and column blocks exchanged.
    Shape transposed() const;

    bool operator==(const Shape& other) const {
        return split_ == other.split_ && extents_ == other.extents_;
    }

    std::string to_string() const;

private:
    std::vector<Index> extents_;
    std::size_t split_;
    Index row_size_;
    Index col_size_;
};

}  // namespace teinv
