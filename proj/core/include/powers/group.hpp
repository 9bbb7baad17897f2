#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace powers {

enum class GroupKind { free_group, free_abelian, direct_product };

/// Describes a concrete group backend: a free group F_k, a free abelian
/// group Z^d, or a direct product of two backends. Values are immutable
/// and cheap to copy; product factors are shared.
class GroupDescriptor {
 public:
  static constexpr int kMaxTextRank = 26;       // a..z in the text format
  static constexpr int kDefaultMaxProductDepth = 2;

  static GroupDescriptor free_group(int rank);
  static GroupDescriptor free_abelian(int rank);
  static GroupDescriptor direct_product(const GroupDescriptor& left, const GroupDescriptor& right,
                                        int max_depth = kDefaultMaxProductDepth);

  GroupKind kind() const { return kind_; }
  /// Rank of a free or free abelian backend; throws for products.
  int rank() const;
  const GroupDescriptor& left() const;
  const GroupDescriptor& right() const;
  int product_depth() const { return depth_; }

  /// Total number of generators across all leaves; global generator
  /// indices 0..generator_count()-1 address them left to right.
  int generator_count() const { return generators_; }

  bool operator==(const GroupDescriptor& other) const;
  bool operator!=(const GroupDescriptor& other) const { return !(*this == other); }

  /// Shorthand: "F2", "Z", "Z3", "F2xZ" (left-associative 'x' chains).
  static GroupDescriptor parse(std::string_view text);
  std::string to_string() const;

 private:
  GroupDescriptor() = default;

  GroupKind kind_ = GroupKind::free_group;
  int rank_ = 0;
  int depth_ = 0;
  int generators_ = 0;
  std::shared_ptr<const GroupDescriptor> left_, right_;
};

/// A group element in reduced normal form. Free-group words store packed
/// signed letters (+i / -i for generator i-1 and its inverse, 1-based so
/// sign survives), free abelian words store exponent vectors, and product
/// words store one component word per factor.
class Word {
 public:
  static Word identity(const GroupDescriptor& desc);
  /// Generator by global index (see GroupDescriptor::generator_count);
  /// sign -1 gives the inverse generator.
  static Word generator(const GroupDescriptor& desc, int index, int sign = +1);
  static Word from_exponents(const GroupDescriptor& desc, std::vector<std::int64_t> exponents);
  static Word product_word(const GroupDescriptor& desc, Word left, Word right);

  const GroupDescriptor& descriptor() const { return desc_; }
  /// Word length: letter count (free), l1 of exponents (abelian),
  /// sum of component lengths (products).
  std::int64_t length() const;
  bool is_identity() const;

  std::span<const std::int8_t> letters() const { return letters_; }
  std::span<const std::int64_t> exponents() const { return exponents_; }
  const Word& left_part() const;
  const Word& right_part() const;

  bool operator==(const Word& other) const;
  bool operator!=(const Word& other) const { return !(*this == other); }

 private:
  friend Word reduce(const GroupDescriptor&, std::span<const int>);
  friend Word mul(const Word&, const Word&);
  friend Word inv(const Word&);
  friend int compare_words(const Word&, const Word&);
  friend struct WordHash;

  explicit Word(GroupDescriptor desc) : desc_(std::move(desc)) {}

  GroupDescriptor desc_;
  std::vector<std::int8_t> letters_;
  std::vector<std::int64_t> exponents_;
  std::vector<Word> parts_;
};

/// Folds a raw letter sequence into the unique reduced word. Letters are
/// nonzero signed 1-based global generator indices: +2 is the second
/// generator, -2 its inverse. Idempotent on already-reduced sequences.
Word reduce(const GroupDescriptor& desc, std::span<const int> letters);
Word reduce(const GroupDescriptor& desc, std::initializer_list<int> letters);

Word mul(const Word& w1, const Word& w2);
Word inv(const Word& w);
/// Reduced s t s^-1.
Word conjugate(const Word& s, const Word& t);
Word power(const Word& w, int n);

/// Total order: length first, then backend-specific lexicographic
/// (free letters ranked a < a^-1 < b < b^-1 < ...). Ball indices and
/// element term order both derive from it.
int compare_words(const Word& a, const Word& b);

struct WordLess {
  bool operator()(const Word& a, const Word& b) const { return compare_words(a, b) < 0; }
};

struct WordHash {
  std::size_t operator()(const Word& w) const;
};

inline constexpr std::size_t kDefaultBallBudget = 5'000'000;

/// Number of words of length <= radius (exact, overflow-free).
std::uint64_t ball_size(const GroupDescriptor& desc, int radius);

/// All words of length <= radius in the canonical order; index 0 is the
/// identity. Throws BudgetExceeded when the count exceeds the budget.
std::vector<Word> ball(const GroupDescriptor& desc, int radius,
                       std::size_t budget = kDefaultBallBudget);

/// Text format: free letters a..z with uppercase inverses and identity
/// "e"; abelian exponent tuples "(n1,n2,...)"; products "w | v".
std::string to_text(const Word& w);
Word parse_word(std::string_view text, const GroupDescriptor& desc);

}  // namespace powers
