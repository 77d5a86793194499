#include "dietsonar/signal/correlation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace dietsonar::signal {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

std::vector<double> cross_correlate(std::span<const double> received, std::span<const double> tpl) {
    if (tpl.empty() || received.empty()) throw ArgumentError("cross_correlate: empty input");
    if (tpl.size() > received.size())
        throw ArgumentError("cross_correlate: template longer than received sequence");

    const std::size_t n = received.size();
    const std::size_t m = tpl.size();
    const std::size_t nfft = next_pow2(n);
    const std::size_t nspec = nfft / 2 + 1;

    double* a = fftw_alloc_real(nfft);
    double* b = fftw_alloc_real(nfft);
    fftw_complex* fa = fftw_alloc_complex(nspec);
    fftw_complex* fb = fftw_alloc_complex(nspec);

    fftw_plan fwd_a, fwd_b, inv;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fwd_a = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), a, fa, FFTW_ESTIMATE);
        fwd_b = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), b, fb, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(nfft), fa, a, FFTW_ESTIMATE);
    }

    std::memcpy(a, received.data(), n * sizeof(double));
    std::memset(a + n, 0, (nfft - n) * sizeof(double));
    std::memcpy(b, tpl.data(), m * sizeof(double));
    std::memset(b + m, 0, (nfft - m) * sizeof(double));

    fftw_execute(fwd_a);
    fftw_execute(fwd_b);
    for (std::size_t i = 0; i < nspec; ++i) {
        const double re = fa[i][0] * fb[i][0] + fa[i][1] * fb[i][1];
        const double im = fa[i][1] * fb[i][0] - fa[i][0] * fb[i][1];
        fa[i][0] = re;
        fa[i][1] = im;
    }
    fftw_execute(inv);

    std::vector<double> corr(n - m + 1);
    const double scale = 1.0 / static_cast<double>(nfft);
    for (std::size_t l = 0; l < corr.size(); ++l) corr[l] = a[l] * scale;

    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd_a);
        fftw_destroy_plan(fwd_b);
        fftw_destroy_plan(inv);
    }
    fftw_free(a);
    fftw_free(b);
    fftw_free(fa);
    fftw_free(fb);
    return corr;
}

CircularCorrelator::Workspace::Workspace(int n) : n_(n) {
    real_ = fftw_alloc_real(static_cast<std::size_t>(n));
    spectrum_ = fftw_alloc_complex(static_cast<std::size_t>(n) / 2 + 1);
}

CircularCorrelator::Workspace::~Workspace() {
    fftw_free(real_);
    fftw_free(spectrum_);
}

CircularCorrelator::CircularCorrelator(std::span<const double> tpl) : n_(static_cast<int>(tpl.size())) {
    if (tpl.empty()) throw ArgumentError("circular correlator: empty template");
    plan_ws_.reset(new Workspace(n_));
    fftw_complex* tpl_spec = fftw_alloc_complex(static_cast<std::size_t>(n_) / 2 + 1);
    template_spectrum_conj_ = tpl_spec;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan_forward_ = fftw_plan_dft_r2c_1d(
            n_, plan_ws_->real_, static_cast<fftw_complex*>(plan_ws_->spectrum_), FFTW_ESTIMATE);
        plan_inverse_ = fftw_plan_dft_c2r_1d(
            n_, static_cast<fftw_complex*>(plan_ws_->spectrum_), plan_ws_->real_, FFTW_ESTIMATE);
    }
    std::memcpy(plan_ws_->real_, tpl.data(), tpl.size() * sizeof(double));
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), plan_ws_->real_, tpl_spec);
    for (int i = 0; i <= n_ / 2; ++i) tpl_spec[i][1] = -tpl_spec[i][1];
}

CircularCorrelator::~CircularCorrelator() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
    fftw_free(template_spectrum_conj_);
}

std::unique_ptr<CircularCorrelator::Workspace> CircularCorrelator::make_workspace() const {
    return std::unique_ptr<Workspace>(new Workspace(n_));
}

void CircularCorrelator::correlate(std::span<const double> frame, std::span<double> out,
                                   Workspace& ws) const {
    if (static_cast<int>(frame.size()) != n_ || ws.n_ != n_)
        throw ArgumentError("circular correlator: frame/workspace length mismatch");
    std::memcpy(ws.real_, frame.data(), frame.size() * sizeof(double));
    auto* spec = static_cast<fftw_complex*>(ws.spectrum_);
    const auto* tpl = static_cast<const fftw_complex*>(template_spectrum_conj_);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), ws.real_, spec);
    for (int i = 0; i <= n_ / 2; ++i) {
        const double re = spec[i][0] * tpl[i][0] - spec[i][1] * tpl[i][1];
        const double im = spec[i][0] * tpl[i][1] + spec[i][1] * tpl[i][0];
        spec[i][0] = re;
        spec[i][1] = im;
    }
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inverse_), spec, ws.real_);
    const double scale = 1.0 / static_cast<double>(n_);
    const std::size_t count = std::min(out.size(), static_cast<std::size_t>(n_));
    for (std::size_t l = 0; l < count; ++l) out[l] = ws.real_[l] * scale;
}

}  // namespace dietsonar::signal
