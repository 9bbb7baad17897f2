#pragma once

#include <vector>

#include "powers/group.hpp"

namespace powers {

/// Rank of the subgroup generated by the given free-group words: the
/// cycle rank of the folded subgroup graph (Stallings folding).
int subgroup_rank(const std::vector<Word>& words);

/// True iff the words form a free basis of the subgroup they generate.
/// In a free group a generating tuple is a basis exactly when the
/// subgroup rank equals the tuple size, which also rules out repeated,
/// mutually inverse, and trivial entries. The free-position norm
/// formulas rest on this fact, so the check is exact combinatorics.
bool is_free_basis(const std::vector<Word>& words);

}  // namespace powers
