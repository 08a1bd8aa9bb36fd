#include "eccprove/oracle.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "eccprove/error.hpp"
#include "eccprove/property.hpp"

namespace eccprove {

BigCount binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigCount r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigCount count_patterns(std::size_t n, std::size_t max_weight) {
    BigCount sum = 0;
    for (std::size_t w = 1; w <= max_weight && w <= n; ++w) sum += binomial(n, w);
    return sum;
}

BitVec encode_ref(const CodeSpec& spec, const BitVec& data) {
    if (data.size() != spec.k) throw InvalidInput("encode_ref: data length != k");
    const BitMatrix g = generator_from_parity_check(spec.h);
    BitVec cw(spec.n);
    for (std::size_t i = 0; i < spec.k; ++i)
        if (data.get(i)) cw ^= g.row(i);
    return cw;
}

namespace {

// Calls f(mask) for every weight-w mask of length n, in lexicographic order of positions.
template <typename F>
void for_each_mask(std::size_t n, std::size_t w, F&& f) {
    if (w > n) return;
    std::vector<std::size_t> idx(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    for (;;) {
        BitVec m(n);
        for (auto i : idx) m.set(i);
        f(m);
        std::size_t i = w;
        while (i > 0 && idx[i - 1] == n - w + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < w; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

ReferenceDecoder::ReferenceDecoder(const CodeSpec& spec) : spec_(spec) {
    if (spec.r > 64) throw InvalidInput("reference decoder: more than 64 check bits");
    const SystematicForm sf = systematic_form(spec.h);
    data_pos_ = sf.free_columns;
    check_pos_ = sf.pivot_columns;
    for (std::size_t w = 1; w <= spec.t_correct; ++w)
        for_each_mask(spec.n, w, [&](const BitVec& m) {
            const std::uint64_t s = mat_vec_mul(spec.h, m).to_uint();
            if (s == 0 || !table_.emplace(s, m).second)
                throw InvalidInput("reference decoder: two correctable patterns share a syndrome");
        });
}

DecodeResult ReferenceDecoder::decode(const BitVec& received) const {
    if (received.size() != spec_.n) throw InvalidInput("decode_ref: received length != n");
    DecodeResult r;
    r.syndrome = mat_vec_mul(spec_.h, received);
    BitVec word = received;
    if (r.syndrome.is_zero()) {
        r.flag = 0;
    } else if (auto it = table_.find(r.syndrome.to_uint()); it != table_.end()) {
        r.flag = it->second.weight();
        word ^= it->second;
    } else {
        r.flag = spec_.t_detect;
    }
    r.data = BitVec(spec_.k);
    for (std::size_t i = 0; i < spec_.k; ++i) r.data.set(i, word.get(data_pos_[i]));
    r.ecc = BitVec(spec_.r);
    for (std::size_t i = 0; i < spec_.r; ++i) r.ecc.set(i, word.get(check_pos_[i]));
    return r;
}

DecodeResult decode_ref(const CodeSpec& spec, const BitVec& received) { return ReferenceDecoder(spec).decode(received); }

bool decode_matches(const CodeSpec& spec, const BitVec& data, std::size_t weight, const DecodeResult& r) {
    if (weight <= spec.t_correct) return r.flag == weight && r.data == data;
    return r.flag == spec.t_detect;
}

std::uint64_t ExhaustiveReport::total_patterns() const {
    std::uint64_t s = 0;
    for (const auto& w : per_weight) s += w.patterns;
    return s;
}

std::uint64_t ExhaustiveReport::total_cases() const {
    std::uint64_t s = 0;
    for (const auto& w : per_weight) s += w.cases;
    return s;
}

bool ExhaustiveReport::all_pass() const {
    return std::all_of(per_weight.begin(), per_weight.end(), [](const WeightStats& w) { return w.fail == 0; });
}

ExhaustiveReport exhaustive_check(const CodeSpec& spec, std::size_t max_weight, DataMode mode, std::uint64_t seed,
                                  std::size_t jobs) {
    if (max_weight > spec.t_detect)
        throw InvalidInput("exhaustive_check: max_weight " + std::to_string(max_weight) + " exceeds t_detect " +
                           std::to_string(spec.t_detect) + " (no behavior is promised there)");
    const BigCount patterns = count_patterns(spec.n, max_weight);
    if (mode == DataMode::All && spec.k > kOracleAllDataMaxK)
        throw BudgetExceeded("exhaustive_check: all-data mode needs 2^" + std::to_string(spec.k) + " x " +
                             patterns.str() + " cases; limit is k <= " + std::to_string(kOracleAllDataMaxK));
    if (mode == DataMode::Fixed && patterns > kOracleFixedMaxPatterns)
        throw BudgetExceeded("exhaustive_check: " + patterns.str() + " patterns required; limit is " +
                             std::to_string(kOracleFixedMaxPatterns));

    ExhaustiveReport rep;
    rep.code_id = spec.id();
    rep.mode = mode;
    rep.seed = seed;
    rep.fixed_data = draw_fixed_data(spec.k, seed);
    rep.data_words = mode == DataMode::All ? (std::uint64_t{1} << spec.k) : 1;

    const ReferenceDecoder dec(spec);
    std::vector<BitVec> codewords;
    std::vector<BitVec> datas;
    for (std::uint64_t d = 0; d < rep.data_words; ++d) {
        datas.push_back(mode == DataMode::All ? BitVec::from_uint(spec.k, d) : rep.fixed_data);
        codewords.push_back(encode_ref(spec, datas.back()));
    }

    std::mutex mu;
    std::optional<std::tuple<std::size_t, std::uint64_t, std::uint64_t>> first_key;
    for (std::size_t w = 1; w <= max_weight; ++w) {
        WeightStats ws;
        ws.weight = w;
        ws.patterns = static_cast<std::uint64_t>(binomial(spec.n, w));
        std::vector<BitVec> masks;
        masks.reserve(ws.patterns);
        for_each_mask(spec.n, w, [&](const BitVec& m) { masks.push_back(m); });

        const std::size_t nthreads = std::max<std::size_t>(1, jobs);
        std::vector<std::uint64_t> pass(nthreads, 0), fail(nthreads, 0);
        auto work = [&](std::size_t tid) {
            for (std::size_t mi = tid; mi < masks.size(); mi += nthreads)
                for (std::uint64_t d = 0; d < rep.data_words; ++d) {
                    const DecodeResult r = dec.decode(codewords[d] ^ masks[mi]);
                    if (decode_matches(spec, datas[d], w, r)) {
                        ++pass[tid];
                    } else {
                        ++fail[tid];
                        std::lock_guard<std::mutex> lock(mu);
                        auto key = std::make_tuple(w, static_cast<std::uint64_t>(mi), d);
                        if (!first_key || key < *first_key) {
                            first_key = key;
                            rep.first_failure = std::make_pair(datas[d], masks[mi]);
                        }
                    }
                }
        };
        if (nthreads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        for (std::size_t t = 0; t < nthreads; ++t) {
            ws.pass += pass[t];
            ws.fail += fail[t];
        }
        ws.cases = ws.pass + ws.fail;
        rep.per_weight.push_back(ws);
    }
    return rep;
}

nlohmann::json to_json(const ExhaustiveReport& r) {
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& w : r.per_weight)
        weights.push_back(
            {{"weight", w.weight}, {"patterns", w.patterns}, {"cases", w.cases}, {"pass", w.pass}, {"fail", w.fail}});
    nlohmann::json j{{"code", r.code_id},
                     {"data_mode", r.mode == DataMode::All ? "all" : "fixed"},
                     {"seed", r.seed},
                     {"data_words", r.data_words},
                     {"per_weight", weights},
                     {"total_patterns", r.total_patterns()},
                     {"total_cases", r.total_cases()},
                     {"all_pass", r.all_pass()}};
    if (r.mode == DataMode::Fixed) j["fixed_data_hex"] = r.fixed_data.to_hex();
    if (r.first_failure)
        j["first_failure"] = {{"data_hex", r.first_failure->first.to_hex()},
                              {"mask_hex", r.first_failure->second.to_hex()}};
    return j;
}

}  // namespace eccprove
