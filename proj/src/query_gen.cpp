#include "asap/query.hpp"
#include "asap/rng.hpp"

namespace asap {

std::vector<BinaryQuery> generate_query_set(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BinaryQuery> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        BinaryQuery q;
        const auto joins = uniform_int(rng, 1, 5);
        q.ops.resize(static_cast<std::size_t>(joins));
        for (auto& op : q.ops) op.kind = static_cast<OccurrenceKind>(uniform_int(rng, 0, 2));
        q.combinator = uniform_int(rng, 0, 1) == 0 ? Combinator::and_ : Combinator::or_;
        for (auto& op : q.ops) {
            op.o_min = static_cast<int>(uniform_int(rng, 1, 10));
            op.o_max = static_cast<int>(uniform_int(rng, op.o_min, 10));
            op.token = static_cast<Token>(uniform_int(rng, 0, kTokenCount - 1));
        }
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace asap
