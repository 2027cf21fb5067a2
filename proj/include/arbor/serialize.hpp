#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "arbor/affine.hpp"
#include "arbor/automorphism.hpp"

namespace arbor {

/// Structured-text document, one automorphism per stream:
///
///   automorphism/1
///   factors 2 2 2
///   level 1 1 0
///   level 2 2 3 0 1
///   ...
///   end
///
/// Level lines carry the images in the fixed mixed-radix vertex order.
void write_automorphism(std::ostream& os, const TruncatedAutomorphism& u);

/// Reads the document back; rejects bad headers, non-permutations, and level
/// maps that do not project onto each other.
TruncatedAutomorphism read_automorphism(std::istream& is);

std::string automorphism_to_text(const TruncatedAutomorphism& u);
TruncatedAutomorphism automorphism_from_text(const std::string& text);

/// One-line record: affine/1 d N m k
void write_affine(std::ostream& os, const AffineElement& a);
AffineElement read_affine(std::istream& is);

/// Rows of already-formatted cells; the emitters never reorder or reformat.
struct TableDoc {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC-style CSV with \n line ends; cells are quoted only when they contain
/// a comma, quote, or newline, so equal documents are byte-identical.
void write_csv(std::ostream& os, const TableDoc& doc);

/// Fixed-width aligned table for terminals.
void write_table(std::ostream& os, const TableDoc& doc);

}  // namespace arbor
