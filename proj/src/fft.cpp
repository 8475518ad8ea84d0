#include "erps/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "erps/error.hpp"

namespace erps {
namespace {

// Plans are created once per (shape, direction) and executed with the
// new-array interface, which FFTW guarantees to be thread safe. Only plan
// creation needs the lock.
class PlanCache {
public:
    fftw_plan get(std::size_t n0, std::size_t n1, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(n0, n1, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second.get();

        std::vector<cplx> scratch_in(n0 * n1), scratch_out(n0 * n1);
        auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
        auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = (n1 == 0) ? fftw_plan_dft_1d(static_cast<int>(n0), in, out, sign, flags)
                                   : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), in, out,
                                                      sign, flags);
        if (plan == nullptr) throw NumericalError("FFTW failed to create a plan");
        auto [it, inserted] = plans_.emplace(key, PlanHandle(plan, &fftw_destroy_plan));
        return it->second.get();
    }

private:
    using PlanHandle = std::unique_ptr<std::remove_pointer_t<fftw_plan>, decltype(&fftw_destroy_plan)>;
    std::mutex mutex_;
    std::map<std::tuple<std::size_t, std::size_t, int>, PlanHandle> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

std::vector<cplx> run(std::span<const cplx> x, std::size_t n0, std::size_t n1, int sign) {
    const std::size_t total = (n1 == 0) ? n0 : n0 * n1;
    if (x.size() != total) throw PreconditionError("fft: input size does not match shape");
    fftw_plan plan = cache().get(n0, n1, sign);
    std::vector<cplx> in(x.begin(), x.end());
    std::vector<cplx> out(total);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    if (sign == FFTW_BACKWARD) {
        const double scale = 1.0 / static_cast<double>(total);
        for (auto& v : out) v *= scale;
    }
    return out;
}

}  // namespace

std::vector<cplx> fft(std::span<const cplx> x) { return run(x, x.size(), 0, FFTW_FORWARD); }
std::vector<cplx> ifft(std::span<const cplx> x) { return run(x, x.size(), 0, FFTW_BACKWARD); }

std::vector<cplx> fft2(std::span<const cplx> x, std::size_t n0, std::size_t n1) {
    return run(x, n0, n1, FFTW_FORWARD);
}
std::vector<cplx> ifft2(std::span<const cplx> x, std::size_t n0, std::size_t n1) {
    return run(x, n0, n1, FFTW_BACKWARD);
}

}  // namespace erps
