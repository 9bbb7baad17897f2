#include "powers/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>

#include "powers/errors.hpp"

namespace powers {

// ---------------------------------------------------------------------------
// GroupDescriptor

GroupDescriptor GroupDescriptor::free_group(int rank) {
  if (rank < 1) throw InvalidDescriptor("free group rank must be >= 1");
  if (rank > kMaxTextRank) throw InvalidDescriptor("free group rank exceeds text-format limit of 26");
  GroupDescriptor d;
  d.kind_ = GroupKind::free_group;
  d.rank_ = rank;
  d.generators_ = rank;
  return d;
}

GroupDescriptor GroupDescriptor::free_abelian(int rank) {
  if (rank < 1) throw InvalidDescriptor("free abelian rank must be >= 1");
  if (rank > kMaxTextRank) throw InvalidDescriptor("free abelian rank exceeds text-format limit of 26");
  GroupDescriptor d;
  d.kind_ = GroupKind::free_abelian;
  d.rank_ = rank;
  d.generators_ = rank;
  return d;
}

GroupDescriptor GroupDescriptor::direct_product(const GroupDescriptor& left, const GroupDescriptor& right,
                                                int max_depth) {
  GroupDescriptor d;
  d.kind_ = GroupKind::direct_product;
  d.depth_ = 1 + std::max(left.depth_, right.depth_);
  if (d.depth_ > max_depth) throw InvalidDescriptor("direct product nesting depth exceeds limit");
  d.generators_ = left.generators_ + right.generators_;
  d.left_ = std::make_shared<const GroupDescriptor>(left);
  d.right_ = std::make_shared<const GroupDescriptor>(right);
  return d;
}

int GroupDescriptor::rank() const {
  if (kind_ == GroupKind::direct_product) throw WrongBackend("rank() on a direct product");
  return rank_;
}

const GroupDescriptor& GroupDescriptor::left() const {
  if (kind_ != GroupKind::direct_product) throw WrongBackend("left() on a non-product");
  return *left_;
}

const GroupDescriptor& GroupDescriptor::right() const {
  if (kind_ != GroupKind::direct_product) throw WrongBackend("right() on a non-product");
  return *right_;
}

bool GroupDescriptor::operator==(const GroupDescriptor& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ != GroupKind::direct_product) return rank_ == other.rank_;
  if (left_ == other.left_ && right_ == other.right_) return true;
  return *left_ == *other.left_ && *right_ == *other.right_;
}

GroupDescriptor GroupDescriptor::parse(std::string_view text) {
  // Split on 'x' separators, fold left-associatively.
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == 'x') {
      tokens.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  auto parse_leaf = [](std::string_view tok) {
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (tok.empty()) throw ParseError("empty group token");
    char head = tok.front();
    std::string_view digits = tok.substr(1);
    int rank = 1;
    if (!digits.empty()) {
      rank = 0;
      for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad group token: '" + std::string(tok) + "'");
        rank = rank * 10 + (c - '0');
        if (rank > 1000) throw ParseError("group rank out of range");
      }
    }
    if (head == 'F') {
      if (digits.empty()) throw ParseError("free group needs an explicit rank, e.g. F2");
      return GroupDescriptor::free_group(rank);
    }
    if (head == 'Z') return GroupDescriptor::free_abelian(rank);
    throw ParseError("unknown group token: '" + std::string(tok) + "'");
  };
  GroupDescriptor result = parse_leaf(tokens[0]);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    result = direct_product(result, parse_leaf(tokens[i]));
  }
  return result;
}

std::string GroupDescriptor::to_string() const {
  switch (kind_) {
    case GroupKind::free_group:
      return "F" + std::to_string(rank_);
    case GroupKind::free_abelian:
      return rank_ == 1 ? "Z" : "Z" + std::to_string(rank_);
    case GroupKind::direct_product:
      return left_->to_string() + "x" + right_->to_string();
  }
  return {};
}

// ---------------------------------------------------------------------------
// Word construction

Word Word::identity(const GroupDescriptor& desc) {
  Word w(desc);
  switch (desc.kind()) {
    case GroupKind::free_group:
      break;
    case GroupKind::free_abelian:
      w.exponents_.assign(static_cast<std::size_t>(desc.rank()), 0);
      break;
    case GroupKind::direct_product:
      w.parts_.push_back(identity(desc.left()));
      w.parts_.push_back(identity(desc.right()));
      break;
  }
  return w;
}

Word Word::generator(const GroupDescriptor& desc, int index, int sign) {
  if (sign != 1 && sign != -1) throw InvalidGenerator("generator sign must be +1 or -1");
  if (index < 0 || index >= desc.generator_count()) throw InvalidGenerator("generator index out of range");
  switch (desc.kind()) {
    case GroupKind::free_group: {
      Word w(desc);
      w.letters_.push_back(static_cast<std::int8_t>(sign * (index + 1)));
      return w;
    }
    case GroupKind::free_abelian: {
      Word w = identity(desc);
      w.exponents_[static_cast<std::size_t>(index)] = sign;
      return w;
    }
    case GroupKind::direct_product: {
      int left_count = desc.left().generator_count();
      Word l = index < left_count ? generator(desc.left(), index, sign) : identity(desc.left());
      Word r = index < left_count ? identity(desc.right()) : generator(desc.right(), index - left_count, sign);
      return product_word(desc, std::move(l), std::move(r));
    }
  }
  throw InvalidGenerator("unreachable");
}

Word Word::from_exponents(const GroupDescriptor& desc, std::vector<std::int64_t> exponents) {
  if (desc.kind() != GroupKind::free_abelian) throw WrongBackend("from_exponents needs a free abelian group");
  if (exponents.size() != static_cast<std::size_t>(desc.rank()))
    throw InvalidGenerator("exponent vector length does not match rank");
  Word w(desc);
  w.exponents_ = std::move(exponents);
  return w;
}

Word Word::product_word(const GroupDescriptor& desc, Word left, Word right) {
  if (desc.kind() != GroupKind::direct_product) throw WrongBackend("product_word needs a direct product");
  if (left.descriptor() != desc.left() || right.descriptor() != desc.right())
    throw GroupMismatch("component words do not match product factors");
  Word w(desc);
  w.parts_.reserve(2);
  w.parts_.push_back(std::move(left));
  w.parts_.push_back(std::move(right));
  return w;
}

std::int64_t Word::length() const {
  switch (desc_.kind()) {
    case GroupKind::free_group:
      return static_cast<std::int64_t>(letters_.size());
    case GroupKind::free_abelian: {
      std::int64_t total = 0;
      for (std::int64_t e : exponents_) total += e < 0 ? -e : e;
      return total;
    }
    case GroupKind::direct_product:
      return parts_[0].length() + parts_[1].length();
  }
  return 0;
}

bool Word::is_identity() const { return length() == 0; }

const Word& Word::left_part() const {
  if (desc_.kind() != GroupKind::direct_product) throw WrongBackend("left_part() on a non-product word");
  return parts_[0];
}

const Word& Word::right_part() const {
  if (desc_.kind() != GroupKind::direct_product) throw WrongBackend("right_part() on a non-product word");
  return parts_[1];
}

bool Word::operator==(const Word& other) const {
  if (desc_ != other.desc_) return false;
  switch (desc_.kind()) {
    case GroupKind::free_group:
      return letters_ == other.letters_;
    case GroupKind::free_abelian:
      return exponents_ == other.exponents_;
    case GroupKind::direct_product:
      return parts_[0] == other.parts_[0] && parts_[1] == other.parts_[1];
  }
  return false;
}

// ---------------------------------------------------------------------------
// Word arithmetic

Word reduce(const GroupDescriptor& desc, std::span<const int> letters) {
  for (int l : letters) {
    if (l == 0 || std::abs(l) > desc.generator_count())
      throw InvalidGenerator("letter references generator outside rank");
  }
  switch (desc.kind()) {
    case GroupKind::free_group: {
      Word w(desc);
      w.letters_.reserve(letters.size());
      for (int l : letters) {
        if (!w.letters_.empty() && w.letters_.back() == -l) {
          w.letters_.pop_back();
        } else {
          w.letters_.push_back(static_cast<std::int8_t>(l));
        }
      }
      return w;
    }
    case GroupKind::free_abelian: {
      Word w = Word::identity(desc);
      for (int l : letters) {
        std::size_t idx = static_cast<std::size_t>(std::abs(l) - 1);
        w.exponents_[idx] += l > 0 ? 1 : -1;
      }
      return w;
    }
    case GroupKind::direct_product: {
      Word w = Word::identity(desc);
      for (int l : letters) {
        w = mul(w, Word::generator(desc, std::abs(l) - 1, l > 0 ? 1 : -1));
      }
      return w;
    }
  }
  throw InvalidGenerator("unreachable");
}

Word reduce(const GroupDescriptor& desc, std::initializer_list<int> letters) {
  return reduce(desc, std::span<const int>(letters.begin(), letters.size()));
}

Word mul(const Word& w1, const Word& w2) {
  if (w1.descriptor() != w2.descriptor()) throw GroupMismatch("mul on words from different groups");
  const GroupDescriptor& desc = w1.descriptor();
  switch (desc.kind()) {
    case GroupKind::free_group: {
      Word out(desc);
      out.letters_ = w1.letters_;
      for (std::int8_t l : w2.letters_) {
        if (!out.letters_.empty() && out.letters_.back() == -l) {
          out.letters_.pop_back();
        } else {
          out.letters_.push_back(l);
        }
      }
      return out;
    }
    case GroupKind::free_abelian: {
      Word out(desc);
      out.exponents_.resize(w1.exponents_.size());
      for (std::size_t i = 0; i < out.exponents_.size(); ++i)
        out.exponents_[i] = w1.exponents_[i] + w2.exponents_[i];
      return out;
    }
    case GroupKind::direct_product:
      return Word::product_word(desc, mul(w1.left_part(), w2.left_part()),
                                mul(w1.right_part(), w2.right_part()));
  }
  throw GroupMismatch("unreachable");
}

Word inv(const Word& w) {
  const GroupDescriptor& desc = w.descriptor();
  switch (desc.kind()) {
    case GroupKind::free_group: {
      Word out(desc);
      out.letters_.reserve(w.letters_.size());
      for (auto it = w.letters_.rbegin(); it != w.letters_.rend(); ++it)
        out.letters_.push_back(static_cast<std::int8_t>(-*it));
      return out;
    }
    case GroupKind::free_abelian: {
      Word out(desc);
      out.exponents_.reserve(w.exponents_.size());
      for (std::int64_t e : w.exponents_) out.exponents_.push_back(-e);
      return out;
    }
    case GroupKind::direct_product:
      return Word::product_word(desc, inv(w.left_part()), inv(w.right_part()));
  }
  throw GroupMismatch("unreachable");
}

Word conjugate(const Word& s, const Word& t) { return mul(mul(s, t), inv(s)); }

Word power(const Word& w, int n) {
  Word result = Word::identity(w.descriptor());
  Word base = n < 0 ? inv(w) : w;
  for (int i = 0, count = std::abs(n); i < count; ++i) result = mul(result, base);
  return result;
}

// ---------------------------------------------------------------------------
// Ordering and hashing

namespace {

// a < a^-1 < b < b^-1 < ...
inline int letter_rank(std::int8_t l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

// 0 < 1 < -1 < 2 < -2 < ...
inline std::uint64_t exponent_rank(std::int64_t e) {
  std::uint64_t mag = static_cast<std::uint64_t>(e < 0 ? -e : e);
  return 2 * mag + (e < 0 ? 1 : 0);
}

}  // namespace

int compare_words(const Word& a, const Word& b) {
  std::int64_t la = a.length(), lb = b.length();
  if (la != lb) return la < lb ? -1 : 1;
  switch (a.descriptor().kind()) {
    case GroupKind::free_group: {
      for (std::size_t i = 0; i < a.letters_.size(); ++i) {
        int ra = letter_rank(a.letters_[i]), rb = letter_rank(b.letters_[i]);
        if (ra != rb) return ra < rb ? -1 : 1;
      }
      return 0;
    }
    case GroupKind::free_abelian: {
      for (std::size_t i = 0; i < a.exponents_.size(); ++i) {
        std::uint64_t ra = exponent_rank(a.exponents_[i]), rb = exponent_rank(b.exponents_[i]);
        if (ra != rb) return ra < rb ? -1 : 1;
      }
      return 0;
    }
    case GroupKind::direct_product: {
      int c = compare_words(a.parts_[0], b.parts_[0]);
      if (c != 0) return c;
      return compare_words(a.parts_[1], b.parts_[1]);
    }
  }
  return 0;
}

std::size_t WordHash::operator()(const Word& w) const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  switch (w.descriptor().kind()) {
    case GroupKind::free_group:
      for (std::int8_t l : w.letters_) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(l)) + 0x100);
      break;
    case GroupKind::free_abelian:
      for (std::int64_t e : w.exponents_) mix(static_cast<std::uint64_t>(e) * 2654435761ull + 17);
      break;
    case GroupKind::direct_product:
      mix(WordHash{}(w.parts_[0]));
      mix(WordHash{}(w.parts_[1]) ^ 0x9e3779b97f4a7c15ull);
      break;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Ball enumeration

namespace {

constexpr std::uint64_t kCountSaturation = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kCountSaturation - b ? kCountSaturation : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kCountSaturation / b) return kCountSaturation;
  return a * b;
}

// Words of length exactly d, per backend.
std::vector<std::uint64_t> sphere_sizes(const GroupDescriptor& desc, int radius) {
  std::vector<std::uint64_t> s(static_cast<std::size_t>(radius) + 1, 0);
  switch (desc.kind()) {
    case GroupKind::free_group: {
      std::uint64_t k = static_cast<std::uint64_t>(desc.rank());
      s[0] = 1;
      if (radius >= 1) s[1] = 2 * k;
      for (int d = 2; d <= radius; ++d) s[d] = sat_mul(s[d - 1], 2 * k - 1);
      break;
    }
    case GroupKind::free_abelian: {
      // DP over coordinates; ways[l] = #vectors of l1 weight l.
      std::vector<std::uint64_t> ways(static_cast<std::size_t>(radius) + 1, 0);
      ways[0] = 1;
      for (int coord = 0; coord < desc.rank(); ++coord) {
        std::vector<std::uint64_t> next(ways.size(), 0);
        for (std::size_t l = 0; l < ways.size(); ++l) {
          if (ways[l] == 0) continue;
          for (std::size_t add = 0; l + add < next.size(); ++add) {
            std::uint64_t mult = add == 0 ? 1 : 2;  // +/- sign
            next[l + add] = sat_add(next[l + add], sat_mul(ways[l], mult));
          }
        }
        ways = std::move(next);
      }
      s = std::move(ways);
      break;
    }
    case GroupKind::direct_product: {
      std::vector<std::uint64_t> ls = sphere_sizes(desc.left(), radius);
      std::vector<std::uint64_t> rs = sphere_sizes(desc.right(), radius);
      for (int d = 0; d <= radius; ++d)
        for (int i = 0; i <= d; ++i)
          s[d] = sat_add(s[d], sat_mul(ls[i], rs[d - i]));
      break;
    }
  }
  return s;
}

void enumerate_abelian(const GroupDescriptor& desc, int radius, std::vector<Word>& out) {
  int rank = desc.rank();
  std::vector<std::int64_t> current(static_cast<std::size_t>(rank), 0);
  // Depth-first over coordinates with remaining l1 budget.
  auto rec = [&](auto&& self, int coord, int remaining) -> void {
    if (coord == rank) {
      out.push_back(Word::from_exponents(desc, current));
      return;
    }
    for (std::int64_t v = -remaining; v <= remaining; ++v) {
      current[static_cast<std::size_t>(coord)] = v;
      self(self, coord + 1, remaining - static_cast<int>(v < 0 ? -v : v));
    }
    current[static_cast<std::size_t>(coord)] = 0;
  };
  rec(rec, 0, radius);
}

}  // namespace

std::uint64_t ball_size(const GroupDescriptor& desc, int radius) {
  if (radius < 0) throw Error("negative ball radius");
  std::vector<std::uint64_t> s = sphere_sizes(desc, radius);
  std::uint64_t total = 0;
  for (std::uint64_t v : s) total = sat_add(total, v);
  return total;
}

std::vector<Word> ball(const GroupDescriptor& desc, int radius, std::size_t budget) {
  std::uint64_t count = ball_size(desc, radius);
  if (count > budget) throw BudgetExceeded("ball of radius " + std::to_string(radius) + " holds " +
                                           std::to_string(count) + " words, budget " + std::to_string(budget));
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  switch (desc.kind()) {
    case GroupKind::free_group: {
      // Generated in length-lex order directly: extend each word of the
      // previous sphere by all non-cancelling letters in rank order.
      out.push_back(Word::identity(desc));
      std::size_t level_begin = 0, level_end = 1;
      std::vector<int> ranked_letters;
      for (int i = 0; i < desc.rank(); ++i) {
        ranked_letters.push_back(i + 1);
        ranked_letters.push_back(-(i + 1));
      }
      for (int d = 1; d <= radius; ++d) {
        for (std::size_t i = level_begin; i < level_end; ++i) {
          for (int l : ranked_letters) {
            const auto base = out[i].letters();
            if (!base.empty() && base.back() == -l) continue;
            std::vector<int> letters(base.begin(), base.end());
            letters.push_back(l);
            out.push_back(reduce(desc, letters));
          }
        }
        level_begin = level_end;
        level_end = out.size();
      }
      return out;
    }
    case GroupKind::free_abelian: {
      enumerate_abelian(desc, radius, out);
      std::sort(out.begin(), out.end(), WordLess{});
      return out;
    }
    case GroupKind::direct_product: {
      std::vector<Word> lb = ball(desc.left(), radius, budget);
      std::vector<Word> rb = ball(desc.right(), radius, budget);
      for (const Word& l : lb) {
        for (const Word& r : rb) {
          if (l.length() + r.length() <= radius) out.push_back(Word::product_word(desc, l, r));
        }
      }
      std::sort(out.begin(), out.end(), WordLess{});
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

void append_word_text(const Word& w, std::string& out) {
  switch (w.descriptor().kind()) {
    case GroupKind::free_group: {
      if (w.letters().empty()) {
        out += 'e';
        return;
      }
      for (std::int8_t l : w.letters()) {
        out += static_cast<char>((l > 0 ? 'a' : 'A') + std::abs(l) - 1);
      }
      return;
    }
    case GroupKind::free_abelian: {
      if (w.is_identity()) {
        out += 'e';
        return;
      }
      out += '(';
      const auto exps = w.exponents();
      for (std::size_t i = 0; i < exps.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(exps[i]);
      }
      out += ')';
      return;
    }
    case GroupKind::direct_product: {
      append_word_text(w.left_part(), out);
      out += " | ";
      append_word_text(w.right_part(), out);
      return;
    }
  }
}

int count_leaves(const GroupDescriptor& desc) {
  if (desc.kind() != GroupKind::direct_product) return 1;
  return count_leaves(desc.left()) + count_leaves(desc.right());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Word parse_leaf_word(std::string_view text, const GroupDescriptor& desc) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty word");
  if (text == "e") return Word::identity(desc);
  switch (desc.kind()) {
    case GroupKind::free_group: {
      std::vector<int> letters;
      for (char c : text) {
        int idx;
        if (c >= 'a' && c <= 'z') {
          idx = c - 'a' + 1;
        } else if (c >= 'A' && c <= 'Z') {
          idx = -(c - 'A' + 1);
        } else {
          throw ParseError(std::string("bad free-group letter: '") + c + "'");
        }
        if (std::abs(idx) > desc.rank()) throw InvalidGenerator(std::string("letter '") + c + "' outside rank");
        letters.push_back(idx);
      }
      return reduce(desc, letters);
    }
    case GroupKind::free_abelian: {
      if (text.front() != '(' || text.back() != ')') throw ParseError("abelian word must look like (n1,n2,...)");
      std::string_view body = text.substr(1, text.size() - 2);
      std::vector<std::int64_t> exps;
      std::size_t start = 0;
      for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || body[i] == ',') {
          std::string token(trim(body.substr(start, i - start)));
          if (token.empty()) throw ParseError("empty exponent in tuple");
          char* end = nullptr;
          long long v = std::strtoll(token.c_str(), &end, 10);
          if (end == nullptr || *end != '\0') throw ParseError("bad exponent: '" + token + "'");
          exps.push_back(v);
          start = i + 1;
        }
      }
      if (exps.size() != static_cast<std::size_t>(desc.rank()))
        throw ParseError("tuple arity does not match group rank");
      return Word::from_exponents(desc, std::move(exps));
    }
    case GroupKind::direct_product:
      throw ParseError("internal: product handled by caller");
  }
  throw ParseError("unreachable");
}

Word parse_word_parts(std::span<const std::string_view> parts, const GroupDescriptor& desc) {
  if (desc.kind() != GroupKind::direct_product) {
    if (parts.size() != 1) throw ParseError("word has wrong number of '|' components");
    return parse_leaf_word(parts[0], desc);
  }
  int left_leaves = count_leaves(desc.left());
  if (static_cast<int>(parts.size()) < left_leaves + 1) throw ParseError("word has too few '|' components");
  Word l = parse_word_parts(parts.subspan(0, static_cast<std::size_t>(left_leaves)), desc.left());
  Word r = parse_word_parts(parts.subspan(static_cast<std::size_t>(left_leaves)), desc.right());
  return Word::product_word(desc, std::move(l), std::move(r));
}

}  // namespace

std::string to_text(const Word& w) {
  std::string out;
  append_word_text(w, out);
  return out;
}

Word parse_word(std::string_view text, const GroupDescriptor& desc) {
  text = trim(text);
  if (text == "e") return Word::identity(desc);
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '|') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != static_cast<std::size_t>(count_leaves(desc)))
    throw ParseError("word '" + std::string(text) + "' has wrong number of '|' components for " + desc.to_string());
  return parse_word_parts(parts, desc);
}

}  // namespace powers
