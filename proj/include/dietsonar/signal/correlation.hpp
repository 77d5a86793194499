#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dietsonar/errors.hpp"

namespace dietsonar::signal {

// corr[l] = sum_k received[l+k] * tpl[k] for l in [0, len(received)-len(tpl)].
// FFT-accelerated; agrees with the direct sum within 1e-6 relative tolerance.
// Throws ArgumentError if the template is longer than the received sequence
// or either input is empty.
std::vector<double> cross_correlate(std::span<const double> received, std::span<const double> tpl);

// Fixed-length circular correlator: one matched-filter column per
// chirp-aligned frame. With the transmit train phase-locked to frame
// boundaries, the wrapped tail of a frame picks up the previous chirp's echo
// at the same lag, so this equals steady-state linear correlation without any
// stream-edge effects.
class CircularCorrelator {
  public:
    explicit CircularCorrelator(std::span<const double> tpl);
    ~CircularCorrelator();
    CircularCorrelator(const CircularCorrelator&) = delete;
    CircularCorrelator& operator=(const CircularCorrelator&) = delete;

    int frame_length() const { return n_; }

    class Workspace {
      public:
        ~Workspace();
        Workspace(const Workspace&) = delete;
        Workspace& operator=(const Workspace&) = delete;

      private:
        friend class CircularCorrelator;
        explicit Workspace(int n);
        double* real_ = nullptr;
        void* spectrum_ = nullptr;  // fftw_complex[n/2+1]
        int n_ = 0;
    };

    std::unique_ptr<Workspace> make_workspace() const;

    // out[l] = sum_k frame[(l+k) mod n] * tpl[k], all n lags. Safe to call
    // concurrently with distinct workspaces.
    void correlate(std::span<const double> frame, std::span<double> out, Workspace& ws) const;

  private:
    int n_ = 0;
    void* plan_forward_ = nullptr;
    void* plan_inverse_ = nullptr;
    void* template_spectrum_conj_ = nullptr;  // fftw_complex[n/2+1]
    std::unique_ptr<Workspace> plan_ws_;
};

}  // namespace dietsonar::signal
