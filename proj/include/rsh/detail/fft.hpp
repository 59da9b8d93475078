#pragma once

#include <fftw3.h>

#include <complex>
#include <memory>
#include <cstddef>
#include <mutex>
#include <new>
#include <span>
#include <vector>

namespace rsh::detail {

// FFTW's planner is not reentrant; only fftw_execute* is.
inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

template <typename T>
class FftwBuffer {
public:
    explicit FftwBuffer(std::size_t n)
        : data_(static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)))), size_(n)
    {
        if (!data_)
            throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data_); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    T* data() noexcept { return data_; }
    const T* data() const noexcept { return data_; }
    std::size_t size() const noexcept { return size_; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

private:
    T* data_;
    std::size_t size_;
};

class FftwPlan {
public:
    explicit FftwPlan(fftw_plan p) : plan_(p) {}
    ~FftwPlan()
    {
        if (plan_) {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan_);
        }
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

// Linear (non-circular) autocorrelation of a real sequence,
// out[b] = sum_j x[j] x[j+b] for b = 0..n-1, via zero padding to a
// power of two >= 2n.
inline std::vector<double> fft_autocorrelation(std::span<const double> x)
{
    const std::size_t n = x.size();
    std::size_t m = 1;
    while (m < 2 * n)
        m <<= 1;
    FftwBuffer<double> real(m);
    FftwBuffer<fftw_complex> spec(m / 2 + 1);
    std::unique_ptr<FftwPlan> forward, backward;
    {
        std::lock_guard lock(fftw_planner_mutex());
        forward = std::make_unique<FftwPlan>(
            fftw_plan_dft_r2c_1d(static_cast<int>(m), real.data(), spec.data(), FFTW_ESTIMATE));
        backward = std::make_unique<FftwPlan>(
            fftw_plan_dft_c2r_1d(static_cast<int>(m), spec.data(), real.data(), FFTW_ESTIMATE));
    }
    for (std::size_t i = 0; i < m; ++i)
        real[i] = i < n ? x[i] : 0.0;
    forward->execute();
    for (std::size_t i = 0; i < m / 2 + 1; ++i) {
        const double re = spec[i][0], im = spec[i][1];
        spec[i][0] = re * re + im * im;
        spec[i][1] = 0.0;
    }
    backward->execute();
    std::vector<double> out(n);
    for (std::size_t b = 0; b < n; ++b)
        out[b] = real[b] / static_cast<double>(m);
    return out;
}

// Evaluates sum_j c[j] exp(2 pi i j m / M) for m = 0..M-1 (unnormalized
// backward DFT, coefficients zero-padded to M). Holds its plan so repeated
// transforms of the same size reuse it.
class TrigSumEvaluator {
public:
    explicit TrigSumEvaluator(std::size_t size) : size_(size), in_(size), out_(size)
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = std::make_unique<FftwPlan>(fftw_plan_dft_1d(
            static_cast<int>(size), in_.data(), out_.data(), FFTW_BACKWARD, FFTW_ESTIMATE));
    }

    std::size_t size() const noexcept { return size_; }

    // Coefficients beyond `size` are folded (aliased) modulo size.
    std::span<const std::complex<double>> operator()(std::span<const std::complex<double>> coeffs)
    {
        for (std::size_t i = 0; i < size_; ++i)
            in_[i][0] = in_[i][1] = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            in_[j % size_][0] += coeffs[j].real();
            in_[j % size_][1] += coeffs[j].imag();
        }
        plan_->execute();
        return {reinterpret_cast<const std::complex<double>*>(out_.data()), size_};
    }

private:
    std::size_t size_;
    FftwBuffer<fftw_complex> in_;
    FftwBuffer<fftw_complex> out_;
    std::unique_ptr<FftwPlan> plan_;
};

} // namespace rsh::detail
