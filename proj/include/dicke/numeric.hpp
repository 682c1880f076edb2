#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

namespace dicke {

// Neumaier-compensated accumulator. Deterministic for a fixed add order.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Scientific notation with 12 significant digits, the format used by every
// emitted data file.
std::string sci12(double x);

// Thread count resolution: explicit request > DICKE_THREADS > hardware.
unsigned resolve_thread_count(int requested);

// Runs fn(i) for every i in [0, count) on up to `threads` workers. Each index
// is claimed exactly once and must write only to its own output slot, so the
// result is independent of scheduling and of the worker count.
void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace dicke
