#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/errors.hpp"

namespace arbor {

using VertexIndex = std::uint64_t;

/// Branching profile of a rooted tree truncated at finite depth.
///
/// factor(n) is the number of children of every vertex on level n-1, so the
/// shape is constant along levels (spherically homogeneous).  Vertices on
/// level n are words x1..xn with 0 <= xi < factor(i); they are stored as
/// mixed-radix integers with the level-1 letter most significant, which makes
/// prefix extraction a single integer division.
class TreeShape {
  public:
    TreeShape() = default;

    explicit TreeShape(std::vector<std::uint32_t> factors) : factors_(std::move(factors)) {
        sizes_.reserve(factors_.size() + 1);
        sizes_.push_back(1);
        for (std::uint32_t m : factors_) {
            if (m < 2) throw shape_error("branching factors must be at least 2");
            VertexIndex prev = sizes_.back();
            if (prev > (VertexIndex{1} << 62) / m)
                throw shape_error("level size overflows 62 bits");
            sizes_.push_back(prev * m);
        }
    }

    static TreeShape uniform(std::uint32_t d, int depth) {
        return TreeShape(std::vector<std::uint32_t>(static_cast<std::size_t>(depth), d));
    }

    int depth() const { return static_cast<int>(factors_.size()); }

    /// Children per vertex between level n-1 and level n (1-based n).
    std::uint32_t factor(int n) const {
        require_level(n);
        return factors_[static_cast<std::size_t>(n) - 1];
    }

    /// Number of vertices on level n; level 0 is the root.
    VertexIndex level_size(int n) const {
        if (n < 0 || n > depth()) throw depth_error("level outside stored depth");
        return sizes_[static_cast<std::size_t>(n)];
    }

    bool constant_arity() const {
        for (std::uint32_t m : factors_)
            if (m != factors_.front()) return false;
        return !factors_.empty();
    }

    /// Truncation of this shape to a shallower depth.
    TreeShape truncated(int depth) const {
        if (depth < 0 || depth > this->depth()) throw depth_error("bad truncation depth");
        return TreeShape(std::vector<std::uint32_t>(factors_.begin(), factors_.begin() + depth));
    }

    /// Shape of each subtree hanging below a level-1 vertex.
    TreeShape shifted() const {
        if (factors_.empty()) throw depth_error("cannot shift an empty shape");
        return TreeShape(std::vector<std::uint32_t>(factors_.begin() + 1, factors_.end()));
    }

    /// Index of the length-(n-1) prefix of a level-n vertex.
    VertexIndex parent(VertexIndex v, int n) const { return v / factor(n); }

    /// Last letter of a level-n vertex.
    std::uint32_t last_letter(VertexIndex v, int n) const {
        return static_cast<std::uint32_t>(v % factor(n));
    }

    /// Index of parent extended by one letter onto level n.
    VertexIndex child(VertexIndex parent, std::uint32_t letter, int n) const {
        return parent * factor(n) + letter;
    }

    /// Prefix of length k of a level-n vertex.
    VertexIndex prefix(VertexIndex v, int n, int k) const {
        require_level(n);
        if (k < 0 || k > n) throw depth_error("prefix length outside 0..n");
        for (int i = n; i > k; --i) v /= factor(i);
        return v;
    }

    std::vector<std::uint32_t> word_of(VertexIndex v, int n) const {
        require_level(n);
        std::vector<std::uint32_t> w(static_cast<std::size_t>(n));
        for (int i = n; i >= 1; --i) {
            w[static_cast<std::size_t>(i) - 1] = static_cast<std::uint32_t>(v % factor(i));
            v /= factor(i);
        }
        return w;
    }

    VertexIndex index_of(const std::vector<std::uint32_t>& word) const {
        int n = static_cast<int>(word.size());
        require_level(n == 0 ? 1 : n);
        VertexIndex v = 0;
        for (int i = 1; i <= n; ++i) {
            if (word[static_cast<std::size_t>(i) - 1] >= factor(i))
                throw shape_error("letter exceeds branching factor");
            v = v * factor(i) + word[static_cast<std::size_t>(i) - 1];
        }
        return v;
    }

    const std::vector<std::uint32_t>& factors() const { return factors_; }

    bool operator==(const TreeShape& o) const { return factors_ == o.factors_; }
    bool operator!=(const TreeShape& o) const { return !(*this == o); }

  private:
    void require_level(int n) const {
        if (n < 1 || n > depth()) throw depth_error("level outside stored depth");
    }

    std::vector<std::uint32_t> factors_;
    std::vector<VertexIndex> sizes_;
};

/// A vertex spelled out as its letter word, for I/O boundaries.
struct Vertex {
    int level = 0;
    std::vector<std::uint32_t> word;
};

/// Renders a vertex word; single characters when every factor fits one digit,
/// dot-separated otherwise.  The root renders as "-".
std::string format_vertex(const TreeShape& shape, VertexIndex v, int n);

}  // namespace arbor
