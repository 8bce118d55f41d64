#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asap/events.hpp"

namespace asap {

enum class OccurrenceKind { atleast, atmost, inrange };
enum class Combinator { and_, or_ };

struct OccurrenceOp {
    OccurrenceKind kind = OccurrenceKind::atleast;
    Token token = Token::r0;
    int o_min = 1;  // used by atleast and inrange
    int o_max = 10; // used by atmost and inrange
    bool operator==(const OccurrenceOp&) const = default;
};

struct BinaryQuery {
    std::vector<OccurrenceOp> ops;  // 1..5
    Combinator combinator = Combinator::and_;
    bool operator==(const BinaryQuery&) const = default;
};

struct CountingQuery {
    std::vector<Token> pattern;
    bool operator==(const CountingQuery&) const = default;
};

using TokenChain = std::vector<Token>;

int count_token(std::span<const Token> chain, Token t);
bool eval_occurrence(const OccurrenceOp& op, std::span<const Token> chain);
bool eval_binary(const BinaryQuery& q, std::span<const Token> chain);

/// Number of disjoint, in-order (not necessarily contiguous) occurrences of
/// the pattern, found by one greedy left-to-right scan.
int count_pattern(std::span<const Token> chain, std::span<const Token> pattern);

int total_runs(std::span<const Token> chain);

/// Fraction of corpus chains on which q holds. Throws EmptyCorpusError.
double empirical_probability(const BinaryQuery& q, std::span<const TokenChain> corpus);

/// Queries whose individual probability lies in the closed range [lo, hi].
std::vector<BinaryQuery> filter_balanced(std::span<const BinaryQuery> queries, std::span<const TokenChain> corpus,
                                         double lo = 0.45, double hi = 0.55);

/// Set-average reading: walks the queries in order and keeps each one that
/// leaves the mean probability of the kept set inside [lo, hi].
std::vector<BinaryQuery> filter_balanced_average(std::span<const BinaryQuery> queries,
                                                 std::span<const TokenChain> corpus, double lo = 0.45,
                                                 double hi = 0.55);

/// Grammar: clauses "atleast N T's", "atmost N T's" or "T inrange [a, b]"
/// joined by a single kind of connective, " AND " or " OR ". T is a digit,
/// o (out) or w (wide); W is read as o. Throws GrammarError with the offset.
BinaryQuery parse_query(std::string_view text);
std::string format_query(const BinaryQuery& q);

CountingQuery parse_counting_query(std::string_view text);
std::string format_counting_query(const CountingQuery& q);

/// Seeded query set. For each query the draw order is: number of clauses
/// (1..5), the clause kinds, the combinator, then per clause o_min (1..10),
/// o_max (o_min..10) and the token. Byte-stable across platforms.
std::vector<BinaryQuery> generate_query_set(std::size_t n, std::uint64_t seed);

}  // namespace asap
