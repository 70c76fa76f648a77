#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nniv/interval.hpp"
#include "nniv/network.hpp"
#include "nniv/propagation.hpp"
#include "nniv/unsafe_region.hpp"

namespace nniv {

enum class Status { safe, uncertain };

/// Worklist element: an input sub-box with its cached output enclosure.
struct WorkItem {
    Box in_box;
    Box out_box;
    std::uint32_t depth = 0;
};

/// Input sub-box of width <= epsilon whose output enclosure still touches
/// the unsafe region.
struct WitnessPair {
    Box in_box;
    Box out_box;
};

/// One leaf of the refinement: either proven safe or left as a witness.
struct PartitionCell {
    Box in_box;
    Box out_box;
    bool safe = true;
};

struct VerifyStats {
    std::uint64_t boxes_processed = 0;
    std::uint64_t boxes_proven_safe = 0;
    std::uint64_t bisections = 0;
    std::uint32_t max_depth = 0;
    double wall_time_s = 0.0;
};

enum class WorklistOrder { fifo, lifo };

struct VerifyOptions {
    bool fail_fast = false;          // stop at the first witness, as the bare algorithm does
    int jobs = 1;                    // worker threads; <= 1 runs single-threaded deterministic
    bool collect_partition = false;  // record every leaf for plotting
    WorklistOrder order = WorklistOrder::fifo;
};

struct Verdict {
    Status status = Status::safe;
    std::vector<WitnessPair> witnesses;
    VerifyStats stats;
    std::vector<PartitionCell> partition;  // filled only when collect_partition
};

namespace detail {

inline void check_verify_inputs(const Network& net, const Box& input_box,
                                const UnsafeRegion& region, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("verify: epsilon must be > 0");
    if (input_box.size() != net.input_dim())
        throw DimensionError("verify: input box has " + std::to_string(input_box.size()) +
                             " dimensions, network expects " + std::to_string(net.input_dim()));
    if (!input_box.finite()) throw std::invalid_argument("verify: input box must be finite");
    region.require_dimension(net.output_dim());
}

// Shared worklist state for the parallel driver.
struct WorklistState {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<WorkItem> queue;
    std::size_t in_flight = 0;
    bool stop = false;
    Verdict verdict;
};

inline WorkItem pop_item(std::deque<WorkItem>& queue, WorklistOrder order) {
    WorkItem item;
    if (order == WorklistOrder::fifo) {
        item = std::move(queue.front());
        queue.pop_front();
    } else {
        item = std::move(queue.back());
        queue.pop_back();
    }
    return item;
}

inline void verify_worker(const Network& net, const UnsafeRegion& region, double epsilon,
                          const VerifyOptions& opt, WorklistState& st) {
    for (;;) {
        std::unique_lock lock(st.mu);
        st.cv.wait(lock, [&] { return st.stop || !st.queue.empty() || st.in_flight == 0; });
        if (st.stop || (st.queue.empty() && st.in_flight == 0)) return;
        if (st.queue.empty()) continue;

        WorkItem item = pop_item(st.queue, opt.order);
        ++st.in_flight;
        st.verdict.stats.boxes_processed++;
        st.verdict.stats.max_depth = std::max(st.verdict.stats.max_depth, item.depth);
        lock.unlock();

        if (!intersects(item.out_box, region)) {
            lock.lock();
            st.verdict.stats.boxes_proven_safe++;
            if (opt.collect_partition)
                st.verdict.partition.push_back({item.in_box, item.out_box, true});
            --st.in_flight;
        } else if (item.in_box.width() > epsilon) {
            auto [left, right] = bisect(item.in_box);
            WorkItem a{std::move(left), {}, item.depth + 1};
            WorkItem b{std::move(right), {}, item.depth + 1};
            a.out_box = network_interval(net, a.in_box);
            b.out_box = network_interval(net, b.in_box);
            lock.lock();
            st.verdict.stats.bisections++;
            st.queue.push_back(std::move(a));
            st.queue.push_back(std::move(b));
            --st.in_flight;
        } else {
            lock.lock();
            if (opt.collect_partition)
                st.verdict.partition.push_back({item.in_box, item.out_box, false});
            st.verdict.witnesses.push_back({std::move(item.in_box), std::move(item.out_box)});
            if (opt.fail_fast) st.stop = true;
            --st.in_flight;
        }
        st.cv.notify_all();
    }
}

}  // namespace detail

/// Specification-guided bisection. Starting from the whole input box,
/// discards any sub-box whose output enclosure misses the unsafe region,
/// bisects the rest until the width tolerance, and reports Safe exactly
/// when every leaf was discarded. A Safe verdict is sound: no input in
/// the box can reach the region.
inline Verdict verify(const Network& net, const Box& input_box, const UnsafeRegion& region,
                      double epsilon, const VerifyOptions& opt = {}) {
    detail::check_verify_inputs(net, input_box, region, epsilon);
    const auto t0 = std::chrono::steady_clock::now();

    detail::WorklistState st;
    st.queue.push_back({input_box, network_interval(net, input_box), 0});

    if (opt.jobs <= 1) {
        auto& v = st.verdict;
        while (!st.queue.empty()) {
            WorkItem item = detail::pop_item(st.queue, opt.order);
            v.stats.boxes_processed++;
            v.stats.max_depth = std::max(v.stats.max_depth, item.depth);
            if (!intersects(item.out_box, region)) {
                v.stats.boxes_proven_safe++;
                if (opt.collect_partition) v.partition.push_back({item.in_box, item.out_box, true});
            } else if (item.in_box.width() > epsilon) {
                auto [left, right] = bisect(item.in_box);
                v.stats.bisections++;
                Box out_left = network_interval(net, left);
                Box out_right = network_interval(net, right);
                st.queue.push_back({std::move(left), std::move(out_left), item.depth + 1});
                st.queue.push_back({std::move(right), std::move(out_right), item.depth + 1});
            } else {
                if (opt.collect_partition)
                    v.partition.push_back({item.in_box, item.out_box, false});
                v.witnesses.push_back({std::move(item.in_box), std::move(item.out_box)});
                if (opt.fail_fast) break;
            }
        }
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(opt.jobs));
        for (int t = 0; t < opt.jobs; ++t)
            workers.emplace_back(detail::verify_worker, std::cref(net), std::cref(region), epsilon,
                                 std::cref(opt), std::ref(st));
        for (auto& w : workers) w.join();
    }

    Verdict verdict = std::move(st.verdict);
    verdict.status = verdict.witnesses.empty() ? Status::safe : Status::uncertain;
    verdict.stats.wall_time_s = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    return verdict;
}

namespace detail {

// Grid boundary j of k over [lo, hi]; endpoints exact, interior points
// monotone nondecreasing and clamped into the interval.
inline double grid_boundary(double lo, double hi, std::uint64_t j, std::uint64_t k) {
    if (j == 0) return lo;
    if (j == k) return hi;
    const double frac = static_cast<double>(j) / static_cast<double>(k);
    return std::min(hi, lo + (hi - lo) * frac);
}

}  // namespace detail

/// Baseline verifier: a uniform partition of the input box into cells of
/// width <= epsilon, each propagated once. Safe iff every cell's output
/// misses the region. Stats count every cell processed.
inline Verdict verify_uniform(const Network& net, const Box& input_box,
                              const UnsafeRegion& region, double epsilon,
                              const VerifyOptions& opt = {}) {
    detail::check_verify_inputs(net, input_box, region, epsilon);
    const auto t0 = std::chrono::steady_clock::now();

    const std::size_t n = input_box.size();
    constexpr std::uint64_t kMaxCells = 100'000'000;
    std::vector<std::uint64_t> cells_per_dim(n, 1);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = input_box.dims[i].width();
        if (w > 0.0) {
            const double k = std::ceil(w / epsilon);
            if (!(k < static_cast<double>(kMaxCells)))
                throw std::invalid_argument("verify_uniform: cell count exceeds 1e8");
            cells_per_dim[i] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
        }
        if (total > kMaxCells / cells_per_dim[i])
            throw std::invalid_argument("verify_uniform: cell count exceeds 1e8");
        total *= cells_per_dim[i];
    }

    const auto cell_at = [&](std::uint64_t linear) {
        Box cell;
        cell.dims.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t k = cells_per_dim[i];
            const std::uint64_t j = linear % k;
            linear /= k;
            const double lo = input_box.dims[i].lo;
            const double hi = input_box.dims[i].hi;
            cell.dims[i].lo = detail::grid_boundary(lo, hi, j, k);
            cell.dims[i].hi = detail::grid_boundary(lo, hi, j + 1, k);
        }
        return cell;
    };

    const int jobs = std::max(1, opt.jobs);
    std::vector<Verdict> partial(static_cast<std::size_t>(jobs));
    std::atomic<bool> stop{false};

    const auto run_chunk = [&](std::uint64_t begin, std::uint64_t end, Verdict& v) {
        for (std::uint64_t c = begin; c < end && !stop.load(std::memory_order_relaxed); ++c) {
            Box cell = cell_at(c);
            Box out = network_interval(net, cell);
            v.stats.boxes_processed++;
            if (intersects(out, region)) {
                if (opt.collect_partition) v.partition.push_back({cell, out, false});
                v.witnesses.push_back({std::move(cell), std::move(out)});
                if (opt.fail_fast) stop.store(true, std::memory_order_relaxed);
            } else {
                v.stats.boxes_proven_safe++;
                if (opt.collect_partition) v.partition.push_back({std::move(cell), std::move(out), true});
            }
        }
    };

    if (jobs == 1) {
        run_chunk(0, total, partial[0]);
    } else {
        std::vector<std::thread> workers;
        for (int t = 0; t < jobs; ++t) {
            const std::uint64_t begin = total * static_cast<std::uint64_t>(t) / jobs;
            const std::uint64_t end = total * (static_cast<std::uint64_t>(t) + 1) / jobs;
            workers.emplace_back(run_chunk, begin, end, std::ref(partial[static_cast<std::size_t>(t)]));
        }
        for (auto& w : workers) w.join();
    }

    Verdict verdict;
    for (Verdict& p : partial) {
        verdict.stats.boxes_processed += p.stats.boxes_processed;
        verdict.stats.boxes_proven_safe += p.stats.boxes_proven_safe;
        for (auto& w : p.witnesses) verdict.witnesses.push_back(std::move(w));
        for (auto& c : p.partition) verdict.partition.push_back(std::move(c));
    }
    verdict.status = verdict.witnesses.empty() ? Status::safe : Status::uncertain;
    verdict.stats.wall_time_s = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    return verdict;
}

}  // namespace nniv
