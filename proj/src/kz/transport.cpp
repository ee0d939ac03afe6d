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

#include "kz/transport.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <string>
#include <thread>

#include "kz/error.hpp"
#include "kz/sampling.hpp"

namespace kz {

namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void
throw_aborted()
{
    throw Error(ErrorCode::protocol, "transport aborted by another rank");
}

void
check_length(std::size_t got, std::size_t want, std::size_t peer)
{
    if (got != want)
        throw Error(ErrorCode::protocol, "allreduce: rank " + std::to_string(peer) + " sent " +
                                             std::to_string(got) + " entries, expected " +
                                             std::to_string(want));
}

// x <- lower + upper, entry-wise, where `mine_is_lower` says which one x is
void
combine(std::span<double> x, const DenseVector& other, bool mine_is_lower)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = mine_is_lower ? x[i] + other[i] : other[i] + x[i];
}

} // namespace

std::size_t
hypercube_rounds(std::size_t np) noexcept
{
    std::size_t r = 0;
    while ((std::size_t{1} << r) < np)
        ++r;
    return r;
}

void
allreduce_sum(Transport& t, std::span<double> x)
{
    const std::size_t np   = t.size();
    const std::size_t rank = t.rank();
    if (np == 1)
        return;

    std::size_t p2 = 1;
    while (p2 * 2 <= np)
        p2 *= 2;
    const std::size_t rem = np - p2;

    // fold-in: rank 2i hands its vector to 2i+1 for i < rem
    std::ptrdiff_t vrank;
    if (rank < 2 * rem)
    {
        if (rank % 2 == 0)
        {
            t.send(rank + 1, x);
            vrank = -1;
        }
        else
        {
            DenseVector other = t.recv(rank - 1);
            check_length(other.size(), x.size(), rank - 1);
            combine(x, other, false);
            vrank = static_cast<std::ptrdiff_t>(rank / 2);
        }
    }
    else
    {
        vrank = static_cast<std::ptrdiff_t>(rank - rem);
    }

    if (vrank >= 0)
    {
        const auto v = static_cast<std::size_t>(vrank);
        for (std::size_t mask = 1; mask < p2; mask <<= 1)
        {
            const std::size_t vpeer = v ^ mask;
            const std::size_t peer  = vpeer < rem ? 2 * vpeer + 1 : vpeer + rem;
            t.send(peer, x);
            DenseVector other = t.recv(peer);
            check_length(other.size(), x.size(), peer);
            combine(x, other, v < vpeer);
        }
    }

    // fold-out
    if (rank < 2 * rem)
    {
        if (rank % 2 == 1)
        {
            t.send(rank - 1, x);
        }
        else
        {
            DenseVector result = t.recv(rank + 1);
            check_length(result.size(), x.size(), rank + 1);
            std::copy(result.begin(), result.end(), x.begin());
        }
    }
}

struct SimWorld::Channel
{
    struct Message
    {
        DenseVector       data;
        Clock::time_point ready;
    };

    std::mutex              mu;
    std::condition_variable cv;
    std::deque<Message>     queue;
};

class SimWorld::Endpoint final : public Transport
{
public:
    Endpoint(SimWorld& world, std::size_t rank) : world_(&world), rank_(rank) {}

    std::size_t rank() const noexcept override { return rank_; }
    std::size_t size() const noexcept override { return world_->np_; }

    void send(std::size_t dest, std::span<const double> data) override
    {
        if (dest >= world_->np_)
            throw Error(ErrorCode::range, "send: no rank " + std::to_string(dest));
        Channel&          ch    = world_->channel(rank_, dest);
        const auto        delay = std::chrono::duration<double>(world_->latency(rank_, dest));
        const auto        ready = Clock::now() + std::chrono::duration_cast<Clock::duration>(delay);
        std::unique_lock  lock(ch.mu);
        ch.cv.wait(lock, [&] {
            return world_->aborted() || ch.queue.size() < world_->opts_.channel_capacity;
        });
        if (world_->aborted())
            throw_aborted();
        ch.queue.push_back({DenseVector(data.begin(), data.end()), ready});
        ++sent_;
        ch.cv.notify_all();
    }

    DenseVector recv(std::size_t src) override
    {
        if (src >= world_->np_)
            throw Error(ErrorCode::range, "recv: no rank " + std::to_string(src));
        Channel&         ch = world_->channel(src, rank_);
        std::unique_lock lock(ch.mu);
        ch.cv.wait(lock, [&] { return world_->aborted() || !ch.queue.empty(); });
        if (world_->aborted())
            throw_aborted();
        const auto ready = ch.queue.front().ready;
        if (Clock::now() < ready)
        {
            lock.unlock();
            std::this_thread::sleep_until(ready);
            lock.lock();
        }
        DenseVector data = std::move(ch.queue.front().data);
        ch.queue.pop_front();
        ch.cv.notify_all();
        return data;
    }

    void barrier() override { world_->wait_barrier(); }

    std::size_t messages_sent() const noexcept override { return sent_; }

private:
    SimWorld*   world_;
    std::size_t rank_;
    std::size_t sent_ = 0;
};

SimWorld::SimWorld(std::size_t np, SimWorldOptions opts) : np_(np), opts_(opts)
{
    if (np == 0)
        throw_invalid("process count must be at least 1");
    if (opts_.channel_capacity == 0)
        throw_invalid("channel capacity must be at least 1");
    if (opts_.ranks_per_node == 0)
        throw_invalid("ranks per node must be at least 1");
    if (!(opts_.intra_latency_s >= 0.0) || !(opts_.inter_latency_s >= 0.0))
        throw_invalid("latency must be non-negative");

    channels_.reserve(np * np);
    for (std::size_t i = 0; i < np * np; ++i)
        channels_.push_back(std::make_unique<Channel>());
    endpoints_.reserve(np);
    for (std::size_t r = 0; r < np; ++r)
        endpoints_.push_back(std::make_unique<Endpoint>(*this, r));
}

SimWorld::~SimWorld() = default;

Transport&
SimWorld::endpoint(std::size_t rank)
{
    if (rank >= np_)
        throw Error(ErrorCode::range, "no rank " + std::to_string(rank));
    return *endpoints_[rank];
}

double
SimWorld::latency(std::size_t src, std::size_t dst) const noexcept
{
    const bool same_node = src / opts_.ranks_per_node == dst / opts_.ranks_per_node;
    return same_node ? opts_.intra_latency_s : opts_.inter_latency_s;
}

void
SimWorld::abort() noexcept
{
    aborted_.store(true);
    for (auto& ch : channels_)
    {
        std::lock_guard lock(ch->mu);
        ch->cv.notify_all();
    }
    std::lock_guard lock(barrier_mu_);
    barrier_cv_.notify_all();
}

void
SimWorld::wait_barrier()
{
    std::unique_lock  lock(barrier_mu_);
    const std::size_t gen = barrier_generation_;
    if (++barrier_waiting_ == np_)
    {
        barrier_waiting_ = 0;
        ++barrier_generation_;
        barrier_cv_.notify_all();
        return;
    }
    barrier_cv_.wait(lock, [&] { return aborted() || barrier_generation_ != gen; });
    if (barrier_generation_ == gen)
        throw_aborted();
}

void
SimWorld::run(const std::function<void(Transport&)>& body)
{
    std::mutex         err_mu;
    std::exception_ptr first;
    {
        std::vector<std::jthread> threads;
        threads.reserve(np_);
        for (std::size_t r = 0; r < np_; ++r)
            threads.emplace_back([&, r] {
                try
                {
                    body(*endpoints_[r]);
                }
                catch (...)
                {
                    {
                        std::lock_guard lock(err_mu);
                        if (!first)
                            first = std::current_exception();
                    }
                    abort();
                }
            });
    }
    if (first)
        std::rethrow_exception(first);
}

DistPartition
make_partition(const LinearSystem& sys, std::size_t np, std::size_t rank)
{
    const std::size_t m = sys.rows();
    const std::size_t n = sys.cols();
    if (np == 0 || np > m)
        throw_invalid("process count " + std::to_string(np) + " must be in [1, " +
                      std::to_string(m) + "]");
    if (rank >= np)
        throw Error(ErrorCode::range, "rank " + std::to_string(rank) + " out of range");

    const RowRange    r     = partition_rows(m, np, rank);
    const std::size_t count = r.hi - r.lo + 1;
    const auto        src   = sys.a.data().subspan(r.lo * n, count * n);
    return DistPartition{r.lo, r.hi, DenseMatrix(count, n, std::vector<double>(src.begin(), src.end())),
                         DenseVector(sys.b.begin() + static_cast<std::ptrdiff_t>(r.lo),
                                     sys.b.begin() + static_cast<std::ptrdiff_t>(r.hi + 1))};
}

} // namespace kz
