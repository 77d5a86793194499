#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dietsonar/errors.hpp"
#include "dietsonar/labels.hpp"
#include "dietsonar/rng.hpp"

namespace dietsonar::nn {

// Convolutional window classifier: a stack of stride-2 3x3 conv stages with
// leaky-ReLU, global average pooling, a linear embedding, and a feedforward
// head whose hidden layers carry batch norm, dropout and leaky-ReLU.
struct ModelConfig {
    int input_channels = 4;
    int input_bins = 150;
    int input_frames = 166;
    std::vector<int> encoder_channels = {16, 32, 64, 128};
    int embedding_dim = 256;
    std::vector<int> head_widths = {128, 64, kNumClasses};
    float dropout_p = 0.25f;
    float leaky_slope = 0.01f;
    // Per-window standardization (zero mean, unit variance) applied inside
    // the forward pass; keeps training invariant to echo amplitude scale.
    bool normalize_input = true;

    void validate() const;
    std::string to_json() const;
    static ModelConfig from_json(const std::string& text);
};

struct ParamInfo {
    std::string name;
    std::vector<int> dims;
    std::size_t offset = 0;
    std::size_t size = 0;
};

struct ConvShape {
    int in_c = 0, in_h = 0, in_w = 0;
    int out_c = 0, out_h = 0, out_w = 0;
    int patch() const { return in_c * 9; }          // 3x3 kernel
    int positions() const { return out_h * out_w; }
};

class Model {
  public:
    explicit Model(const ModelConfig& cfg);

    const ModelConfig& config() const { return cfg_; }
    const std::vector<ConvShape>& conv_shapes() const { return conv_shapes_; }

    std::span<float> params() { return params_; }
    std::span<const float> params() const { return params_; }
    std::span<float> buffers() { return buffers_; }
    std::span<const float> buffers() const { return buffers_; }
    const std::vector<ParamInfo>& param_infos() const { return param_infos_; }
    const std::vector<ParamInfo>& buffer_infos() const { return buffer_infos_; }
    std::span<float> param(const std::string& name);

    // Seeded uniform fan-in initialization; biases zero, BN gamma 1 / beta 0,
    // running stats (0, 1).
    void init_weights(std::uint64_t seed);

    std::size_t input_size() const {
        return static_cast<std::size_t>(cfg_.input_channels) * cfg_.input_bins * cfg_.input_frames;
    }

    // ---- evaluation -------------------------------------------------------
    struct EvalWorkspace {
        std::vector<float> act_a, act_b, cols, head;
    };
    EvalWorkspace make_eval_workspace() const;

    // Deterministic eval-mode forward: dropout off, BN uses running stats.
    // probs must have kNumClasses entries. Thread-safe with distinct
    // workspaces.
    void forward(std::span<const float> window, std::span<float> probs, EvalWorkspace& ws) const;

    // ---- training internals (used by train()) -----------------------------
    std::size_t acts_floats_per_sample() const { return acts_per_sample_; }
    std::size_t cols_scratch_floats() const { return cols_scratch_; }
    std::size_t act_buffer_floats() const { return max_act_; }

    // Encoder pass storing every stage activation in acts
    // (acts_floats_per_sample floats); the embedding lands at
    // acts + embedding_offset().
    void encoder_forward_train(const float* window, float* acts, float* cols_scratch) const;
    std::size_t embedding_offset() const { return emb_offset_; }

    // Backpropagates d_emb through the encoder, accumulating parameter
    // gradients into grad (full parameter length). Scratch buffers:
    // cols/dcols of cols_scratch_floats, d_a/d_b of act_buffer_floats.
    void encoder_backward(const float* acts, const float* d_emb, std::span<float> grad,
                          float* cols_scratch, float* dcols_scratch, float* d_a, float* d_b) const;

    struct HeadTrainState {
        int batch = 0;
        const float* emb = nullptr;            // embedding_dim x B, column-major
        std::vector<std::vector<float>> x_hat;  // per BN layer, width x B
        std::vector<std::vector<float>> inv_std;
        std::vector<std::vector<float>> mask;   // dropout masks, width x B
        std::vector<std::vector<float>> act;    // post-activation, width x B
        std::vector<float> logits;              // kNumClasses x B
    };

    // Training-mode head on a batch of embeddings (column-major
    // embedding_dim x B). Batch-norm uses batch statistics and updates the
    // running buffers; dropout masks come from dropout_rng.
    void head_forward_train(const float* emb_batch, int batch, HeadTrainState& state,
                            const RandomStream& dropout_rng);

    // d_logits (kNumClasses x B) -> head parameter grads into grad and
    // d_emb (embedding_dim x B).
    void head_backward(const HeadTrainState& state, const float* d_logits, float* d_emb,
                       std::span<float> grad) const;

  private:
    struct HeadLayer {
        int in = 0, out = 0;
        std::size_t w, b;            // param offsets
        std::size_t gamma = 0, beta = 0;  // BN params (hidden layers only)
        std::size_t run_mean = 0, run_var = 0;  // buffer offsets
        bool has_bn = false;
    };

    std::size_t add_param(const std::string& name, std::vector<int> dims);
    std::size_t add_buffer(const std::string& name, std::vector<int> dims);

    void conv_forward(const ConvShape& s, const float* w, const float* b, const float* in, float* out,
                      float* cols) const;
    void im2col(const ConvShape& s, const float* in, float* cols) const;
    void standardize_input(std::span<const float> window, float* out) const;

    ModelConfig cfg_;
    std::vector<ConvShape> conv_shapes_;
    std::vector<std::size_t> conv_w_, conv_b_;  // param offsets per stage
    std::size_t embed_w_ = 0, embed_b_ = 0;
    std::vector<HeadLayer> head_;
    std::vector<ParamInfo> param_infos_;
    std::vector<ParamInfo> buffer_infos_;
    std::vector<float> params_;
    std::vector<float> buffers_;

    std::vector<std::size_t> act_offsets_;  // x0, a1..aN, gap within the acts arena
    std::size_t gap_offset_ = 0, emb_offset_ = 0;
    std::size_t acts_per_sample_ = 0, cols_scratch_ = 0, max_act_ = 0;

    static constexpr float kBnEps = 1e-5f;
    static constexpr float kBnMomentum = 0.1f;
};

}  // namespace dietsonar::nn
