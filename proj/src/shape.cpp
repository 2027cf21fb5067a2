#include "arbor/shape.hpp"

#include <sstream>

namespace arbor {

std::string format_vertex(const TreeShape& shape, VertexIndex v, int n) {
    if (n == 0) return "-";
    bool wide = false;
    for (int i = 1; i <= n; ++i)
        if (shape.factor(i) > 10) wide = true;
    std::vector<std::uint32_t> word = shape.word_of(v, n);
    std::ostringstream out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (wide && i > 0) out << '.';
        out << word[i];
    }
    return out.str();
}

}  // namespace arbor
