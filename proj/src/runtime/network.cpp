#include "mifdcop/runtime/network.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "mifdcop/error.hpp"

namespace mifdcop {

std::string_view to_string(MessageKind kind) {
    switch (kind) {
        case MessageKind::ValueBroadcast: return "ValueBroadcast";
        case MessageKind::AlsUp: return "AlsUp";
        case MessageKind::AlsDown: return "AlsDown";
        case MessageKind::TemperatureSet: return "TemperatureSet";
        case MessageKind::Control: return "Control";
    }
    return "?";
}

std::uint64_t MessageStats::total_messages(MessageKind kind) const {
    std::uint64_t total = 0;
    for (const auto& row : messages) total += row[static_cast<std::size_t>(kind)];
    return total;
}

std::uint64_t MessageStats::total_payload(MessageKind kind) const {
    std::uint64_t total = 0;
    for (const auto& row : payload_values) total += row[static_cast<std::size_t>(kind)];
    return total;
}

// Fixed set of threads that run one index range per dispatch.
class WorkerPool {
public:
    explicit WorkerPool(unsigned threads) {
        for (unsigned i = 0; i < threads; ++i) {
            workers_.emplace_back([this] { work(); });
        }
    }

    ~WorkerPool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
            ++generation_;
        }
        wake_.notify_all();
        for (auto& t : workers_) t.join();
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
        {
            std::lock_guard lock(mutex_);
            fn_ = &fn;
            count_ = n;
            next_.store(0);
            active_ = workers_.size();
            error_ = nullptr;
            ++generation_;
        }
        wake_.notify_all();
        std::unique_lock lock(mutex_);
        done_.wait(lock, [this] { return active_ == 0; });
        if (error_) std::rethrow_exception(error_);
    }

private:
    void work() {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(std::size_t)>* fn = nullptr;
            std::size_t count = 0;
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] { return generation_ != seen; });
                seen = generation_;
                if (stop_) return;
                fn = fn_;
                count = count_;
            }
            try {
                for (std::size_t i = next_.fetch_add(1); i < count; i = next_.fetch_add(1)) {
                    (*fn)(i);
                }
            } catch (...) {
                std::lock_guard lock(mutex_);
                if (!error_) error_ = std::current_exception();
            }
            {
                std::lock_guard lock(mutex_);
                if (--active_ == 0) done_.notify_one();
            }
        }
    }

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t)>* fn_ = nullptr;
    std::size_t count_ = 0;
    std::atomic<std::size_t> next_{0};
    std::size_t active_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

Network::Network(std::vector<std::vector<VariableId>> allowed)
    : Network(std::move(allowed), Options{}) {}

Network::Network(std::vector<std::vector<VariableId>> allowed, Options options)
    : allowed_(std::move(allowed)), options_(std::move(options)) {
    const std::size_t n = allowed_.size();
    for (auto& a : allowed_) std::sort(a.begin(), a.end());
    inboxes_.resize(n);
    contexts_.resize(n);
    for (VariableId i = 0; i < n; ++i) contexts_[i].id_ = i;
    stats_.messages.assign(n, {});
    stats_.payload_values.assign(n, {});
    if (!options_.step_order.empty()) {
        auto sorted = options_.step_order;
        std::sort(sorted.begin(), sorted.end());
        bool permutation = sorted.size() == n;
        for (std::size_t i = 0; permutation && i < n; ++i) permutation = sorted[i] == i;
        if (!permutation) {
            throw ConfigError("step order must be a permutation of the agent ids");
        }
    }
    if (options_.threads > 1) {
        pool_ = std::make_unique<WorkerPool>(options_.threads);
    }
}

Network::~Network() = default;

Network Network::for_problem(const Problem& problem, const BfsTree& tree, Options options) {
    std::vector<std::vector<VariableId>> allowed(problem.num_variables());
    for (VariableId v = 0; v < problem.num_variables(); ++v) {
        auto nb = problem.neighbors(v);
        allowed[v].assign(nb.begin(), nb.end());
        if (tree.parent[v]) allowed[v].push_back(*tree.parent[v]);
        allowed[v].insert(allowed[v].end(), tree.children[v].begin(), tree.children[v].end());
        std::sort(allowed[v].begin(), allowed[v].end());
        allowed[v].erase(std::unique(allowed[v].begin(), allowed[v].end()), allowed[v].end());
    }
    return Network(std::move(allowed), std::move(options));
}

void Network::run_one(const StepFn& step) {
    ++round_;
    const std::size_t n = allowed_.size();
    for (VariableId i = 0; i < n; ++i) {
        contexts_[i].round_ = round_;
        contexts_[i].inbox_ = &inboxes_[i];
        contexts_[i].outbox_.clear();
    }
    if (pool_) {
        pool_->parallel_for(n, [&](std::size_t i) { step(contexts_[i]); });
    } else if (!options_.step_order.empty()) {
        for (VariableId i : options_.step_order) step(contexts_[i]);
    } else {
        for (VariableId i = 0; i < n; ++i) step(contexts_[i]);
    }

    for (auto& inbox : inboxes_) inbox.clear();
    for (VariableId from = 0; from < n; ++from) {
        const auto& allowed = allowed_[from];
        for (auto& [to, msg] : contexts_[from].outbox_) {
            if (!std::binary_search(allowed.begin(), allowed.end(), to)) {
                throw ProtocolError("agent " + std::to_string(from) + " sent " +
                                    std::string(to_string(msg.kind)) + " to non-adjacent agent " +
                                    std::to_string(to));
            }
            auto kind = static_cast<std::size_t>(msg.kind);
            stats_.messages[from][kind] += 1;
            stats_.payload_values[from][kind] += msg.payload.size();
            inboxes_[to].push_back(std::move(msg));
        }
        contexts_[from].outbox_.clear();
    }
}

void Network::run_rounds(const StepFn& step, std::uint64_t rounds) {
    for (std::uint64_t r = 0; r < rounds; ++r) run_one(step);
}

std::uint64_t Network::run_until(const StepFn& step, const std::function<bool()>& done,
                                 std::uint64_t max_rounds) {
    std::uint64_t r = 0;
    while (r < max_rounds) {
        run_one(step);
        ++r;
        if (done()) break;
    }
    return r;
}

}  // namespace mifdcop
