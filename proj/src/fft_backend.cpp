#include "nsshell/fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace nsshell::fft {

namespace {

struct PlanCache {
    std::mutex mutex;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
        fftw_cleanup();
    }

    fftw_plan get(int dim, int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex);
        const auto key = std::make_tuple(dim, n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;

        std::vector<std::complex<double>> scratch;
        scratch.resize(static_cast<std::size_t>(std::pow(double(n), dim)) + 1);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        int dims[3] = {n, n, n};
        fftw_plan plan = fftw_plan_dft(dim, dims, buf, buf, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fft: plan creation failed");
        plans.emplace(key, plan);
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(int dim, int n, std::complex<double>* data, int sign) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("fft: dim must be 1..3");
    fftw_plan plan = cache().get(dim, n, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void backward(int dim, int n, std::complex<double>* data) {
    execute(dim, n, data, FFTW_BACKWARD);
}

void forward(int dim, int n, std::complex<double>* data) {
    execute(dim, n, data, FFTW_FORWARD);
}

}  // namespace nsshell::fft
