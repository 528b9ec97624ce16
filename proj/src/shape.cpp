#include "teinv/shape.hpp"

#include <sstream>

namespace teinv {

namespace {

Index product(const std::vector<Index>& extents, std::size_t begin, std::size_t end) {
    Index p = 1;
    for (std::size_t i = begin; i < end; ++i) p *= extents[i];
    return p;
}

}  // namespace

Shape::Shape(std::vector<Index> extents, std::size_t split)
    : extents_(std::move(extents)), split_(split) {
    if (split_ > extents_.size()) {
        throw shape_error("shape split " + std::to_string(split_) + " exceeds mode count " +
                          std::to_string(extents_.size()));
    }
    for (std::size_t i = 0; i < extents_.size(); ++i) {
        if (extents_[i] < 1) {
            throw shape_error("extent of mode " + std::to_string(i) + " must be positive, got " +
                              std::to_string(extents_[i]));
        }
    }
    row_size_ = product(extents_, 0, split_);
    col_size_ = product(extents_, split_, extents_.size());
}

std::vector<Index> Shape::row_extents() const {
    return {extents_.begin(), extents_.begin() + static_cast<std::ptrdiff_t>(split_)};
}

std::vector<Index> Shape::col_extents() const {
    return {extents_.begin() + static_cast<std::ptrdiff_t>(split_), extents_.end()};
}

Shape Shape::transposed() const {
    std::vector<Index> swapped = col_extents();
    const std::vector<Index> rows = row_extents();
    swapped.insert(swapped.end(), rows.begin(), rows.end());
    return Shape(std::move(swapped), extents_.size() - split_);
}

std::string Shape::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < extents_.size(); ++i) {
        if (i == split_) os << '|';
        else if (i > 0) os << 'x';
        os << extents_[i];
    }
    if (split_ == extents_.size()) os << '|';
    os << ')';
    return os.str();
}

}  // namespace teinv
