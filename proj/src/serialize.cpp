#include "arbor/serialize.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "arbor/errors.hpp"

namespace arbor {

namespace {

constexpr const char* kAutoMagic = "automorphism/1";
constexpr const char* kAffineMagic = "affine/1";

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::uint64_t parse_u64(const std::string& tok, int line_no) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw parse_error("expected an unsigned integer, got '" + tok + "'", line_no, 1);
    try {
        return std::stoull(tok);
    } catch (const std::out_of_range&) {
        throw parse_error("integer out of range: '" + tok + "'", line_no, 1);
    }
}

/// Next nonblank line, tolerating CRLF input.
std::string next_line(std::istream& is, int& line_no) {
    std::string line;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) return line;
    }
    throw parse_error("unexpected end of document", line_no + 1, 1);
}

}  // namespace

void write_automorphism(std::ostream& os, const TruncatedAutomorphism& u) {
    os << kAutoMagic << '\n';
    os << "factors";
    for (std::uint32_t m : u.shape().factors()) os << ' ' << m;
    os << '\n';
    for (int n = 1; n <= u.depth(); ++n) {
        os << "level " << n;
        for (VertexIndex image : u.level(n)) os << ' ' << image;
        os << '\n';
    }
    os << "end\n";
}

TruncatedAutomorphism read_automorphism(std::istream& is) {
    int line_no = 0;
    if (next_line(is, line_no) != kAutoMagic)
        throw parse_error(std::string("expected header '") + kAutoMagic + "'", line_no, 1);

    std::vector<std::string> toks = tokens_of(next_line(is, line_no));
    if (toks.empty() || toks[0] != "factors" || toks.size() < 2)
        throw parse_error("expected a 'factors' line with at least one entry", line_no, 1);
    std::vector<std::uint32_t> factors;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        std::uint64_t f = parse_u64(toks[i], line_no);
        if (f < 2 || f > UINT32_MAX)
            throw parse_error("branching factor out of range: '" + toks[i] + "'", line_no, 1);
        factors.push_back(static_cast<std::uint32_t>(f));
    }
    TreeShape shape;
    try {
        shape = TreeShape(factors);
    } catch (const error& e) {
        throw parse_error(e.what(), line_no, 1);
    }

    std::vector<LevelMap> levels;
    for (int n = 1; n <= shape.depth(); ++n) {
        toks = tokens_of(next_line(is, line_no));
        if (toks.size() < 2 || toks[0] != "level" ||
            parse_u64(toks[1], line_no) != static_cast<std::uint64_t>(n))
            throw parse_error("expected 'level " + std::to_string(n) + " ...'", line_no, 1);
        VertexIndex size = shape.level_size(n);
        if (toks.size() != 2 + size)
            throw parse_error("level " + std::to_string(n) + " needs " + std::to_string(size) +
                                  " images, got " + std::to_string(toks.size() - 2),
                              line_no, 1);
        LevelMap map(size);
        for (VertexIndex v = 0; v < size; ++v)
            map[v] = parse_u64(toks[2 + v], line_no);
        levels.push_back(std::move(map));
    }
    if (next_line(is, line_no) != "end")
        throw parse_error("expected trailing 'end' line", line_no, 1);

    try {
        TruncatedAutomorphism u(shape, std::move(levels));
        ConsistencyReport rep = verify_consistency(u);
        if (!rep.ok)
            throw shape_error("level " + std::to_string(rep.level) +
                              " does not project onto level " + std::to_string(rep.level - 1));
        return u;
    } catch (const parse_error&) {
        throw;
    } catch (const error& e) {
        throw parse_error(e.what(), line_no, 1);
    }
}

std::string automorphism_to_text(const TruncatedAutomorphism& u) {
    std::ostringstream os;
    write_automorphism(os, u);
    return os.str();
}

TruncatedAutomorphism automorphism_from_text(const std::string& text) {
    std::istringstream is(text);
    return read_automorphism(is);
}

void write_affine(std::ostream& os, const AffineElement& a) {
    os << kAffineMagic << ' ' << a.d << ' ' << a.depth << ' ' << a.m << ' ' << a.k << '\n';
}

AffineElement read_affine(std::istream& is) {
    int line_no = 0;
    std::vector<std::string> toks = tokens_of(next_line(is, line_no));
    if (toks.size() != 5 || toks[0] != kAffineMagic)
        throw parse_error(std::string("expected '") + kAffineMagic + " d N m k'", line_no, 1);
    std::uint64_t d = parse_u64(toks[1], line_no);
    std::uint64_t depth = parse_u64(toks[2], line_no);
    if (d < 2 || d > UINT32_MAX || depth < 1 || depth > INT32_MAX)
        throw parse_error("branching factor or depth out of range", line_no, 1);
    mpz_class m, k;
    try {
        m = mpz_class(toks[3]);
        k = mpz_class(toks[4]);
    } catch (const std::invalid_argument&) {
        throw parse_error("expected integer residues", line_no, 1);
    }
    return AffineElement(static_cast<std::uint32_t>(d), static_cast<int>(depth), m, k);
}

namespace {

void csv_cell(std::ostream& os, const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        os << s;
        return;
    }
    os << '"';
    for (char c : s) {
        if (c == '"') os << '"';
        os << c;
    }
    os << '"';
}

void csv_row(std::ostream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        csv_cell(os, row[i]);
    }
    os << '\n';
}

}  // namespace

void write_csv(std::ostream& os, const TableDoc& doc) {
    if (!doc.header.empty()) csv_row(os, doc.header);
    for (const auto& row : doc.rows) csv_row(os, row);
}

void write_table(std::ostream& os, const TableDoc& doc) {
    std::size_t cols = doc.header.size();
    for (const auto& row : doc.rows) cols = std::max(cols, row.size());
    std::vector<std::size_t> width(cols, 0);
    auto widen = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    };
    widen(doc.header);
    for (const auto& row : doc.rows) widen(row);

    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << "  ";
            os << row[i];
            if (i + 1 < row.size()) os << std::string(width[i] - row[i].size(), ' ');
        }
        os << '\n';
    };
    if (!doc.header.empty()) {
        emit(doc.header);
        std::vector<std::string> rule;
        rule.reserve(doc.header.size());
        for (std::size_t i = 0; i < doc.header.size(); ++i) rule.emplace_back(width[i], '-');
        emit(rule);
    }
    for (const auto& row : doc.rows) emit(row);
}

}  // namespace arbor
