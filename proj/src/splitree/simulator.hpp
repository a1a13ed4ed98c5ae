#pragma once

#include "splitree/coin_source.hpp"
#include "splitree/high_prec.hpp"
#include "splitree/variant.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace splitree {

//! One vertex of a recorded splitting tree.
struct TraceNode {
    std::size_t id;
    std::optional<std::size_t> parent;
    std::vector<int> items; //!< sorted, distinct
    unsigned label;         //!< order in which the algorithm reaches the vertex
};

//! Splitting tree of one trial; nodes[0] is the root holding {1..n}. Tails
//! children precede heads children. Conflict traces include empty vertices;
//! election, coin-toss traces only the non-empty ones.
struct TreeTrace {
    std::vector<TraceNode> nodes;

    std::vector<std::size_t> children(std::size_t id) const;
};

struct JointStatistic {
    std::uint64_t height;
    std::uint64_t size;
};

struct TrialOutcome {
    Variant variant;
    unsigned n;
    std::uint64_t statistic;
    std::optional<JointStatistic> joint;
    std::optional<TreeTrace> trace; //!< absent for Sort
};

struct SimulatorOptions {
    //! Longest root-to-vertex path before a trial is abandoned.
    std::size_t depth_cap{1'000'000};
    //! Worker threads for batches; 0 means hardware concurrency.
    unsigned threads{0};
};

//! Runs one trial. The statistic is the quantity the variant's recurrence
//! describes: Conflict counts every vertex (empty ones too), the election
//! heights count splits, the election sizes count non-empty vertices,
//! CoinToss counts rounds, MaxFind counts vertices of the pruned tree, Sort
//! is one plus the total election time over all pivots.
//! \throws Error(ScriptExhausted / ScriptLengthMismatch) from scripted sources,
//!         Error(DepthCapExceeded), Error(InvalidArgument) when n == 0.
TrialOutcome run_trial(Variant variant,
                       unsigned n,
                       CoinSource& source,
                       bool keep_trace = false,
                       const SimulatorOptions& options = {});

//! Height and size of one election tree, measured on the same run.
TrialOutcome run_joint_election(unsigned n,
                                CoinSource& source,
                                bool keep_trace = false,
                                const SimulatorOptions& options = {});

struct SampleStatistics {
    HighPrec mean;
    HighPrec sample_variance;
    HighPrec std_error; //!< sqrt(sample_variance / trials)
};

struct SimulationSummary {
    Variant variant;
    unsigned n;
    std::uint64_t trials;
    HighPrec mean;
    HighPrec sample_variance;
    HighPrec std_error;
    //! Joint election runs: the first statistic is the height, these hold
    //! the size and the height/size sample covariance.
    std::optional<SampleStatistics> size;
    std::optional<HighPrec> covariance;
    std::optional<HighPrec> covariance_std_error;
    //! MaxFindRevised is a conjectured reading of an unpublished algorithm.
    bool hypothesis{false};
};

//! Mean and variance over trials 0..trials-1, trial t drawing its coins from
//! CoinSource::seeded(seed, t). Results do not depend on thread count.
//! \throws Error(InvalidArgument) unless n >= 1 and trials >= 2.
SimulationSummary estimate(Variant variant,
                           unsigned n,
                           std::uint64_t trials,
                           std::uint64_t seed,
                           const SimulatorOptions& options = {});

//! \throws Error(InvalidArgument) unless n >= 2 and trials >= 2.
SimulationSummary estimate_joint_election(unsigned n,
                                          std::uint64_t trials,
                                          std::uint64_t seed,
                                          const SimulatorOptions& options = {});

//! Exact sample statistics of integer observations, rounded once to
//! HighPrec at the working precision.
SampleStatistics sample_statistics(const std::vector<std::uint64_t>& values);

} // namespace splitree
