#include "splitree/simulator.hpp"

#include "splitree/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace splitree {

namespace {

//! Records vertices when tracing is on; a no-op otherwise.
class Tracer {
public:
    explicit Tracer(bool enabled) : m_Enabled{enabled} {}

    std::size_t add(std::optional<std::size_t> parent, const std::vector<int>& items) {
        if (!m_Enabled) {
            return 0;
        }
        std::size_t id = m_Trace.nodes.size();
        m_Trace.nodes.push_back({id, parent, items, 0});
        return id;
    }

    void label(std::size_t id, std::uint64_t value) {
        if (m_Enabled) {
            m_Trace.nodes[id].label = static_cast<unsigned>(value);
        }
    }

    std::optional<TreeTrace> take() {
        if (!m_Enabled) {
            return std::nullopt;
        }
        return std::move(m_Trace);
    }

private:
    bool m_Enabled;
    TreeTrace m_Trace;
};

std::vector<int> iota_items(unsigned n) {
    std::vector<int> items(n);
    std::iota(items.begin(), items.end(), 1);
    return items;
}

void check_depth(std::size_t depth, const SimulatorOptions& options) {
    if (depth > options.depth_cap) {
        throw Error{ErrorCode::DepthCapExceeded,
                    "splitting tree deeper than the cap of " + std::to_string(options.depth_cap)};
    }
}

//! Tosses one coin per item; tails (0) go to \p tails, heads (1) to \p heads.
void split_group(CoinSource& source,
                 const std::vector<int>& items,
                 std::size_t depth,
                 std::vector<int>& tails,
                 std::vector<int>& heads) {
    Bits bits(items.size());
    source.split(items, depth, bits);
    tails.clear();
    heads.clear();
    for (std::size_t i = 0; i < items.size(); ++i) {
        (bits[i] == 0 ? tails : heads).push_back(items[i]);
    }
}

std::uint64_t run_conflict(unsigned n, CoinSource& source, Tracer& tracer, const SimulatorOptions& options) {
    struct Work {
        std::vector<int> items;
        std::size_t node;
        std::size_t depth;
    };
    std::vector<Work> stack;
    auto root = iota_items(n);
    stack.push_back({root, tracer.add(std::nullopt, root), 0});
    std::uint64_t vertices = 0;
    std::vector<int> tails;
    std::vector<int> heads;
    while (!stack.empty()) {
        Work work = std::move(stack.back());
        stack.pop_back();
        tracer.label(work.node, ++vertices);
        if (work.items.size() <= 1) {
            continue;
        }
        check_depth(work.depth + 1, options);
        split_group(source, work.items, work.depth, tails, heads);
        std::size_t tailsNode = tracer.add(work.node, tails);
        std::size_t headsNode = tracer.add(work.node, heads);
        // Left subtree first.
        stack.push_back({heads, headsNode, work.depth + 1});
        stack.push_back({tails, tailsNode, work.depth + 1});
    }
    return vertices;
}

struct ElectionResult {
    std::uint64_t height;
    std::uint64_t size;
    int leader;
};

//! The election walk: split, continue with the tails group unless it is
//! empty, stop once at most \p stop members remain.
ElectionResult run_election(std::vector<int> current,
                            std::size_t stop,
                            CoinSource& source,
                            Tracer& tracer,
                            const SimulatorOptions& options) {
    ElectionResult result{0, 1, 0};
    std::size_t node = tracer.add(std::nullopt, current);
    tracer.label(node, 1);
    std::vector<int> tails;
    std::vector<int> heads;
    std::size_t depth = 0;
    while (current.size() > stop) {
        check_depth(depth + 1, options);
        split_group(source, current, depth, tails, heads);
        ++depth;
        ++result.height;
        std::optional<std::size_t> tailsNode;
        std::optional<std::size_t> headsNode;
        if (!tails.empty()) {
            tailsNode = tracer.add(node, tails);
            tracer.label(*tailsNode, ++result.size);
        }
        if (!heads.empty()) {
            headsNode = tracer.add(node, heads);
            tracer.label(*headsNode, ++result.size);
        }
        if (!tails.empty()) {
            current.swap(tails);
            node = *tailsNode;
        } else {
            current.swap(heads);
            node = *headsNode;
        }
    }
    result.leader = current.empty() ? 0 : current.front();
    return result;
}

std::uint64_t run_coin_toss(unsigned n, CoinSource& source, Tracer& tracer, const SimulatorOptions& options) {
    auto current = iota_items(n);
    std::size_t node = tracer.add(std::nullopt, current);
    tracer.label(node, 1);
    std::uint64_t rounds = 0;
    std::vector<int> tails;
    std::vector<int> heads;
    while (!current.empty()) {
        check_depth(rounds + 1, options);
        split_group(source, current, rounds, tails, heads);
        ++rounds;
        if (!tails.empty()) {
            node = tracer.add(node, tails);
            tracer.label(node, rounds + 1);
        }
        current.swap(tails);
    }
    return rounds;
}

std::uint64_t run_max_find(unsigned n,
                           bool revised,
                           CoinSource& source,
                           Tracer& tracer,
                           const SimulatorOptions& options) {
    struct Work {
        std::vector<int> items;
        std::optional<std::size_t> parent;
        std::size_t depth;
        bool deferred; //!< heads group, filtered against r when reached
        bool counted;  //!< advances the vertex counter when reached
    };
    std::vector<Work> stack;
    stack.push_back({iota_items(n), std::nullopt, 0, false, false});
    std::uint64_t k = 0;
    int r = 0;
    std::vector<int> tails;
    std::vector<int> heads;
    while (!stack.empty()) {
        Work work = std::move(stack.back());
        stack.pop_back();
        if (work.deferred) {
            std::erase_if(work.items, [r](int x) { return x <= r; });
        }
        if (work.counted) {
            ++k;
        }
        std::size_t node = tracer.add(work.parent, work.items);
        tracer.label(node, k + 1);
        if (work.items.empty()) {
            continue;
        }
        if (work.items.size() == 1) {
            r = std::max(r, work.items.front());
            continue;
        }
        check_depth(work.depth + 1, options);
        split_group(source, work.items, work.depth, tails, heads);
        bool countHeads = !revised || !tails.empty();
        stack.push_back({heads, node, work.depth + 1, true, countHeads});
        stack.push_back({tails, node, work.depth + 1, false, true});
    }
    return k + 1;
}

std::uint64_t run_sort(unsigned n, CoinSource& source, const SimulatorOptions& options) {
    std::vector<std::vector<int>> stack;
    stack.push_back(iota_items(n));
    std::uint64_t total = 0;
    Tracer silent{false};
    while (!stack.empty()) {
        std::vector<int> items = std::move(stack.back());
        stack.pop_back();
        if (items.size() <= 1) {
            total += 1;
            continue;
        }
        auto election = run_election(items, 1, source, silent, options);
        total += 1 + election.height;
        std::vector<int> below;
        std::vector<int> above;
        for (int x : items) {
            if (x < election.leader) {
                below.push_back(x);
            } else if (x > election.leader) {
                above.push_back(x);
            }
        }
        // psi(L < s) runs before psi(L > s).
        stack.push_back(std::move(above));
        stack.push_back(std::move(below));
    }
    return total;
}

void check_n(unsigned n, unsigned minimum) {
    if (n < minimum) {
        throw Error{ErrorCode::InvalidArgument,
                    "n must be at least " + std::to_string(minimum) + ", got " + std::to_string(n)};
    }
}

void check_trials(std::uint64_t trials) {
    if (trials < 2) {
        throw Error{ErrorCode::InvalidArgument, "at least 2 trials are required"};
    }
}

//! Runs body(t) for t in [0, trials) on a pool of threads; the first
//! exception is rethrown on the caller's thread.
template<typename BODY>
void parallel_trials(std::uint64_t trials, unsigned threads, BODY body) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    if (threads <= 1) {
        for (std::uint64_t t = 0; t < trials; ++t) {
            body(t);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    constexpr std::uint64_t CHUNK = 1024;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) {
        pool.emplace_back([&] {
            for (;;) {
                std::uint64_t begin = next.fetch_add(CHUNK);
                if (begin >= trials) {
                    return;
                }
                std::uint64_t end = std::min(trials, begin + CHUNK);
                try {
                    for (std::uint64_t t = begin; t < end; ++t) {
                        body(t);
                    }
                } catch (...) {
                    std::lock_guard lock{failureMutex};
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = trials;
                    return;
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

Integer to_integer(std::uint64_t value) {
    Integer result;
    mpz_import(result.get_mpz_t(), 1, 1, sizeof(value), 0, 0, &value);
    return result;
}

//! Exact sums of the integer observations.
struct ExactSums {
    Integer count;
    Integer sum;
    Integer squares;
};

ExactSums exact_sums(const std::vector<std::uint64_t>& values) {
    ExactSums sums{to_integer(values.size()), 0, 0};
    for (auto v : values) {
        Integer x = to_integer(v);
        sums.sum += x;
        sums.squares += x * x;
    }
    return sums;
}

HighPrec sqrt_nonnegative(const HighPrec& x) {
    return x > 0 ? HighPrec{sqrt(x)} : HighPrec{0};
}

} // unnamed::

std::vector<std::size_t> TreeTrace::children(std::size_t id) const {
    std::vector<std::size_t> result;
    for (const auto& node : nodes) {
        if (node.parent == id) {
            result.push_back(node.id);
        }
    }
    return result;
}

TrialOutcome run_trial(Variant variant,
                       unsigned n,
                       CoinSource& source,
                       bool keep_trace,
                       const SimulatorOptions& options) {
    check_n(n, 1);
    Tracer tracer{keep_trace && variant != Variant::Sort};
    TrialOutcome outcome{variant, n, 0, std::nullopt, std::nullopt};
    switch (variant) {
    case Variant::Conflict:
        outcome.statistic = run_conflict(n, source, tracer, options);
        break;
    case Variant::ElectionHeight:
    case Variant::DrawHeight:
        outcome.statistic =
            run_election(iota_items(n), variant == Variant::DrawHeight ? 2 : 1, source, tracer, options)
                .height;
        break;
    case Variant::ElectionSize:
    case Variant::DrawSize:
        outcome.statistic =
            run_election(iota_items(n), variant == Variant::DrawSize ? 2 : 1, source, tracer, options).size;
        break;
    case Variant::CoinToss:
        outcome.statistic = run_coin_toss(n, source, tracer, options);
        break;
    case Variant::MaxFind:
    case Variant::MaxFindRevised:
        outcome.statistic = run_max_find(n, variant == Variant::MaxFindRevised, source, tracer, options);
        break;
    case Variant::Sort:
        outcome.statistic = run_sort(n, source, options);
        break;
    }
    outcome.trace = tracer.take();
    return outcome;
}

TrialOutcome run_joint_election(unsigned n, CoinSource& source, bool keep_trace, const SimulatorOptions& options) {
    check_n(n, 1);
    Tracer tracer{keep_trace};
    auto election = run_election(iota_items(n), 1, source, tracer, options);
    TrialOutcome outcome{Variant::ElectionHeight, n, election.height, JointStatistic{election.height, election.size},
                         tracer.take()};
    return outcome;
}

SampleStatistics sample_statistics(const std::vector<std::uint64_t>& values) {
    check_trials(values.size());
    ExactSums sums = exact_sums(values);
    Rational mean{sums.sum, sums.count};
    mean.canonicalize();
    Rational variance{sums.count * sums.squares - sums.sum * sums.sum, sums.count * (sums.count - 1)};
    variance.canonicalize();
    SampleStatistics stats;
    stats.mean = to_high_prec(mean);
    stats.sample_variance = to_high_prec(variance);
    stats.std_error = sqrt_nonnegative(stats.sample_variance / HighPrec{sums.count.get_mpz_t()});
    return stats;
}

SimulationSummary estimate(Variant variant,
                           unsigned n,
                           std::uint64_t trials,
                           std::uint64_t seed,
                           const SimulatorOptions& options) {
    check_n(n, 1);
    check_trials(trials);
    std::vector<std::uint64_t> values(trials);
    parallel_trials(trials, options.threads, [&](std::uint64_t t) {
        auto source = CoinSource::seeded(seed, t);
        values[t] = run_trial(variant, n, source, false, options).statistic;
    });
    auto stats = sample_statistics(values);
    SimulationSummary summary{variant, n, trials, stats.mean, stats.sample_variance, stats.std_error,
                              std::nullopt, std::nullopt, std::nullopt, variant == Variant::MaxFindRevised};
    return summary;
}

SimulationSummary estimate_joint_election(unsigned n,
                                          std::uint64_t trials,
                                          std::uint64_t seed,
                                          const SimulatorOptions& options) {
    check_n(n, 2);
    check_trials(trials);
    std::vector<std::uint64_t> heights(trials);
    std::vector<std::uint64_t> sizes(trials);
    parallel_trials(trials, options.threads, [&](std::uint64_t t) {
        auto source = CoinSource::seeded(seed, t);
        auto outcome = run_joint_election(n, source, false, options);
        heights[t] = outcome.joint->height;
        sizes[t] = outcome.joint->size;
    });
    auto height = sample_statistics(heights);
    auto size = sample_statistics(sizes);

    Integer count = to_integer(trials);
    Integer sumH{0};
    Integer sumY{0};
    Integer sumHY{0};
    for (std::uint64_t t = 0; t < trials; ++t) {
        Integer h = to_integer(heights[t]);
        Integer y = to_integer(sizes[t]);
        sumH += h;
        sumY += y;
        sumHY += h * y;
    }
    Rational covariance{count * sumHY - sumH * sumY, count * (count - 1)};
    covariance.canonicalize();

    // Standard error of the covariance from the spread of the centred
    // products (h - mean_h)(y - mean_y).
    HighPrec meanH = height.mean;
    HighPrec meanY = size.mean;
    HighPrec productSum{0};
    HighPrec productSquares{0};
    for (std::uint64_t t = 0; t < trials; ++t) {
        HighPrec p = (HighPrec{heights[t]} - meanH) * (HighPrec{sizes[t]} - meanY);
        productSum += p;
        productSquares += p * p;
    }
    HighPrec m = HighPrec{count.get_mpz_t()};
    HighPrec productVariance = (productSquares - productSum * productSum / m) / (m - 1);

    SimulationSummary summary{Variant::ElectionHeight, n, trials, height.mean, height.sample_variance,
                              height.std_error, size, to_high_prec(covariance),
                              sqrt_nonnegative(productVariance / m), false};
    return summary;
}

} // namespace splitree
