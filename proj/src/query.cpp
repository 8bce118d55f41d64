#include "asap/query.hpp"

#include <algorithm>
#include <cctype>

#include "asap/errors.hpp"

namespace asap {
namespace {

constexpr std::size_t kMaxClauses = 5;

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    std::size_t pos() const { return pos_; }
    bool done() const { return pos_ >= text_.size(); }

    void skip_spaces() {
        while (!done() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    // Case-insensitive keyword that must end at a non-alphanumeric boundary.
    bool keyword(std::string_view word) {
        if (text_.size() - pos_ < word.size()) return false;
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (std::tolower(static_cast<unsigned char>(text_[pos_ + i])) != word[i]) return false;
        }
        const std::size_t after = pos_ + word.size();
        if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after]))) return false;
        pos_ = after;
        return true;
    }

    void expect(char c, const char* what) {
        skip_spaces();
        if (done() || text_[pos_] != c) fail(std::string("expected ") + what);
        ++pos_;
    }

    int integer() {
        skip_spaces();
        const std::size_t start = pos_;
        long value = 0;
        while (!done() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1000000) fail("number too large");
            ++pos_;
        }
        if (pos_ == start) fail("expected a number");
        return static_cast<int>(value);
    }

    Token token() {
        skip_spaces();
        if (done()) fail("expected an event token");
        const auto t = token_from_symbol(text_[pos_]);
        if (!t) fail(std::string("unknown event token '") + text_[pos_] + "'");
        ++pos_;
        return *t;
    }

    [[noreturn]] void fail(const std::string& what) const { throw GrammarError(pos_, what); }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

OccurrenceOp parse_clause(Cursor& in) {
    in.skip_spaces();
    OccurrenceOp op;
    const bool atleast = in.keyword("atleast");
    if (atleast || in.keyword("atmost")) {
        op.kind = atleast ? OccurrenceKind::atleast : OccurrenceKind::atmost;
        const int n = in.integer();
        (atleast ? op.o_min : op.o_max) = n;
        op.token = in.token();
        in.expect('\'', "\"'s\"");
        if (in.done() || !in.keyword("s")) in.fail("expected \"'s\"");
        return op;
    }
    op.kind = OccurrenceKind::inrange;
    op.token = in.token();
    in.skip_spaces();
    if (!in.keyword("inrange")) in.fail("expected atleast, atmost or inrange");
    in.expect('[', "'['");
    op.o_min = in.integer();
    in.expect(',', "','");
    op.o_max = in.integer();
    in.expect(']', "']'");
    if (op.o_min > op.o_max) in.fail("range lower bound exceeds upper bound");
    return op;
}

double probability(std::size_t hits, std::size_t n) { return static_cast<double>(hits) / static_cast<double>(n); }

}  // namespace

int count_token(std::span<const Token> chain, Token t) {
    return static_cast<int>(std::count(chain.begin(), chain.end(), t));
}

bool eval_occurrence(const OccurrenceOp& op, std::span<const Token> chain) {
    const int c = count_token(chain, op.token);
    switch (op.kind) {
        case OccurrenceKind::atleast: return c >= op.o_min;
        case OccurrenceKind::atmost: return c <= op.o_max;
        case OccurrenceKind::inrange: return c >= op.o_min && c <= op.o_max;
    }
    return false;
}

bool eval_binary(const BinaryQuery& q, std::span<const Token> chain) {
    const auto holds = [&](const OccurrenceOp& op) { return eval_occurrence(op, chain); };
    return q.combinator == Combinator::and_ ? std::all_of(q.ops.begin(), q.ops.end(), holds)
                                            : std::any_of(q.ops.begin(), q.ops.end(), holds);
}

int count_pattern(std::span<const Token> chain, std::span<const Token> pattern) {
    if (pattern.empty()) throw Error("count_pattern needs a non-empty pattern");
    int count = 0;
    std::size_t k = 0;
    for (const Token t : chain) {
        if (t != pattern[k]) continue;
        if (++k == pattern.size()) {
            ++count;
            k = 0;
        }
    }
    return count;
}

int total_runs(std::span<const Token> chain) {
    int sum = 0;
    for (const Token t : chain) sum += token_runs(t);
    return sum;
}

double empirical_probability(const BinaryQuery& q, std::span<const TokenChain> corpus) {
    if (corpus.empty()) throw EmptyCorpusError("empirical probability over an empty corpus");
    std::size_t hits = 0;
    for (const auto& chain : corpus) hits += eval_binary(q, chain);
    return probability(hits, corpus.size());
}

std::vector<BinaryQuery> filter_balanced(std::span<const BinaryQuery> queries, std::span<const TokenChain> corpus,
                                         double lo, double hi) {
    std::vector<BinaryQuery> kept;
    for (const auto& q : queries) {
        const double p = empirical_probability(q, corpus);
        if (p >= lo && p <= hi) kept.push_back(q);
    }
    return kept;
}

std::vector<BinaryQuery> filter_balanced_average(std::span<const BinaryQuery> queries,
                                                 std::span<const TokenChain> corpus, double lo, double hi) {
    std::vector<BinaryQuery> kept;
    double sum = 0.0;
    for (const auto& q : queries) {
        const double p = empirical_probability(q, corpus);
        const double mean = (sum + p) / static_cast<double>(kept.size() + 1);
        if (mean < lo || mean > hi) continue;
        sum += p;
        kept.push_back(q);
    }
    return kept;
}

BinaryQuery parse_query(std::string_view text) {
    Cursor in(text);
    BinaryQuery q;
    bool have_combinator = false;
    for (;;) {
        if (q.ops.size() == kMaxClauses) in.fail("more than 5 clauses");
        q.ops.push_back(parse_clause(in));
        in.skip_spaces();
        if (in.done()) break;
        const std::size_t at = in.pos();
        Combinator c;
        if (in.keyword("and")) {
            c = Combinator::and_;
        } else if (in.keyword("or")) {
            c = Combinator::or_;
        } else {
            in.fail("expected AND or OR");
        }
        if (have_combinator && c != q.combinator) throw GrammarError(at, "AND and OR cannot be mixed");
        q.combinator = c;
        have_combinator = true;
    }
    return q;
}

std::string format_query(const BinaryQuery& q) {
    std::string out;
    for (std::size_t i = 0; i < q.ops.size(); ++i) {
        if (i) out += q.combinator == Combinator::and_ ? " AND " : " OR ";
        const auto& op = q.ops[i];
        const char t = token_symbol(op.token);
        switch (op.kind) {
            case OccurrenceKind::atleast:
                out += "atleast " + std::to_string(op.o_min) + " " + t + "'s";
                break;
            case OccurrenceKind::atmost:
                out += "atmost " + std::to_string(op.o_max) + " " + t + "'s";
                break;
            case OccurrenceKind::inrange:
                out += std::string(1, t) + " inrange [" + std::to_string(op.o_min) + ", " + std::to_string(op.o_max) +
                       "]";
                break;
        }
    }
    return out;
}

CountingQuery parse_counting_query(std::string_view text) {
    Cursor in(text);
    in.skip_spaces();
    if (!in.keyword("count")) in.fail("expected 'count'");
    CountingQuery q;
    for (;;) {
        q.pattern.push_back(in.token());
        in.skip_spaces();
        if (in.done()) break;
        if (!in.keyword("then")) in.fail("expected THEN");
    }
    return q;
}

std::string format_counting_query(const CountingQuery& q) {
    std::string out = "count";
    for (std::size_t i = 0; i < q.pattern.size(); ++i) {
        out += i ? " THEN " : " ";
        out += token_symbol(q.pattern[i]);
    }
    return out;
}

}  // namespace asap
