#include "sks/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sks::transform {
namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(fftw_r2r_kind kind, int n) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(static_cast<int>(kind), n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        // Out-of-place, unaligned: callers pass std::vector storage.
        std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_r2r_1d(n, in.data(), out.data(), kind,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

void execute(fftw_r2r_kind kind, std::span<const double> in, std::span<double> out) {
    if (in.size() != out.size()) throw std::invalid_argument("transform: size mismatch");
    if (in.data() == out.data()) throw std::invalid_argument("transform: in-place call");
    fftw_plan plan = cache().get(kind, static_cast<int>(in.size()));
    // Out-of-place r2r plans preserve their input.
    fftw_execute_r2r(plan, const_cast<double*>(in.data()), out.data());
}

}  // namespace

void dst1(std::span<const double> in, std::span<double> out) {
    if (in.empty()) throw std::invalid_argument("dst1: empty input");
    execute(FFTW_RODFT00, in, out);
}

void dct1(std::span<const double> in, std::span<double> out) {
    if (in.size() < 2) throw std::invalid_argument("dct1: length must be >= 2");
    execute(FFTW_REDFT00, in, out);
}

}  // namespace sks::transform
