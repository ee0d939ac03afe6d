// Copyright 2026 The kzpar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KZ_TRANSPORT_HPP
#define KZ_TRANSPORT_HPP

//
// Point-to-point message passing between np ranks, and the collectives built
// on it. Messages between a given pair of ranks are delivered in order; there
// are no tags, so every rank must issue its collectives in the same program
// order.
//

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "kz/linalg.hpp"
#include "kz/sysgen.hpp"

namespace kz {

class Transport
{
public:
    virtual ~Transport() = default;

    virtual std::size_t rank() const noexcept = 0;
    virtual std::size_t size() const noexcept = 0;

    virtual void        send(std::size_t dest, std::span<const double> data) = 0;
    virtual DenseVector recv(std::size_t src)                               = 0;
    virtual void        barrier()                                           = 0;

    // point-to-point messages sent by this rank so far
    virtual std::size_t messages_sent() const noexcept = 0;
};

///
/// In-place sum over all ranks by recursive doubling on a hypercube.
///
/// With p2 the largest power of two <= np and rem = np - p2, ranks below
/// 2*rem fold in first: each even one sends its vector to the odd rank above
/// it and sits out, and gets the result back at the end. The remaining p2
/// ranks run log2(p2) exchange rounds. Each pairwise combine is computed as
/// (lower rank's value) + (upper rank's value), so all ranks end with
/// identical bytes.
///
/// Messages per rank: log2(np) for a power of two, at most 2*ceil(log2(np))
/// otherwise. Throws Error(protocol) when the ranks' lengths differ.
///
void allreduce_sum(Transport& t, std::span<double> x);

// ceil(log2(np)), 0 for np = 1
std::size_t hypercube_rounds(std::size_t np) noexcept;

struct SimWorldOptions
{
    std::size_t channel_capacity = 16; // messages buffered per ordered rank pair
    double      intra_latency_s  = 0.0;
    double      inter_latency_s  = 0.0;
    std::size_t ranks_per_node   = 1; // ranks r, s share a node iff r/rpn == s/rpn
};

///
/// In-process world of np ranks meant to run on np threads. Channels are
/// bounded FIFO queues, one per ordered pair; a send blocks while its queue is
/// full and a message becomes receivable only after the configured latency.
///
class SimWorld
{
public:
    explicit SimWorld(std::size_t np, SimWorldOptions opts = {});
    ~SimWorld();

    SimWorld(const SimWorld&)            = delete;
    SimWorld& operator=(const SimWorld&) = delete;

    std::size_t size() const noexcept { return np_; }

    // endpoint for `rank`; owned by the world
    Transport& endpoint(std::size_t rank);

    // Wakes every blocked rank, which then throws Error(protocol). Used when
    // one rank fails so the others cannot deadlock.
    void abort() noexcept;
    bool aborted() const noexcept { return aborted_.load(); }

    ///
    /// Runs body(endpoint(r)) on np threads and joins them. If any rank
    /// throws, the world is aborted and the first exception is rethrown.
    ///
    void run(const std::function<void(Transport&)>& body);

private:
    class Endpoint;
    struct Channel;

    Channel& channel(std::size_t src, std::size_t dst) { return *channels_[src * np_ + dst]; }
    double   latency(std::size_t src, std::size_t dst) const noexcept;

    std::size_t                            np_;
    SimWorldOptions                        opts_;
    std::vector<std::unique_ptr<Channel>>  channels_;
    std::vector<std::unique_ptr<Endpoint>> endpoints_;
    std::atomic<bool>                      aborted_{false};

    // generation-counting barrier that also wakes on abort
    std::mutex              barrier_mu_;
    std::condition_variable barrier_cv_;
    std::size_t             barrier_waiting_    = 0;
    std::size_t             barrier_generation_ = 0;

    void wait_barrier();
};

/// Contiguous row block owned by one rank, with local copies of A and b.
struct DistPartition
{
    std::size_t lo = 0; // first global row
    std::size_t hi = 0; // last global row (inclusive)
    DenseMatrix a;
    DenseVector b;
};

// Rows floor(r*m/np) .. floor((r+1)*m/np) - 1. Throws Error(invalid_argument)
// when np is zero or exceeds m.
DistPartition make_partition(const LinearSystem& sys, std::size_t np, std::size_t rank);

} // namespace kz

#endif // KZ_TRANSPORT_HPP
