#include "dietsonar/nn/model.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>

#include "dietsonar/nn/loss.hpp"

namespace dietsonar::nn {

namespace {

using MatMap = Eigen::Map<Eigen::MatrixXf>;
using ConstMatMap = Eigen::Map<const Eigen::MatrixXf>;
using VecMap = Eigen::Map<Eigen::VectorXf>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXf>;

inline void leaky_relu_inplace(float* x, std::size_t n, float slope) {
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0f ? x[i] : slope * x[i];
}

// derivative picked from the stored post-activation sign
inline float leaky_relu_grad(float post, float slope) { return post > 0.0f ? 1.0f : slope; }

}  // namespace

void ModelConfig::validate() const {
    if (input_channels < 1 || input_bins < 1 || input_frames < 1)
        throw ConfigError("model: input dims must be positive");
    if (encoder_channels.empty()) throw ConfigError("model: encoder needs at least one stage");
    for (const int c : encoder_channels)
        if (c < 1) throw ConfigError("model: encoder channels must be positive");
    if (embedding_dim < 1) throw ConfigError("model: embedding_dim must be positive");
    if (head_widths.empty() || head_widths.back() != kNumClasses)
        throw ConfigError("model: final head layer must have one unit per class");
    for (const int w : head_widths)
        if (w < 1) throw ConfigError("model: head widths must be positive");
    if (!(dropout_p >= 0.0f && dropout_p < 1.0f)) throw ConfigError("model: dropout_p must be in [0, 1)");
    // Every stride-2 stage must keep a non-empty spatial map.
    int h = input_bins, w = input_frames;
    for (std::size_t i = 0; i < encoder_channels.size(); ++i) {
        h = (h + 2 - 3) / 2 + 1;
        w = (w + 2 - 3) / 2 + 1;
        if (h < 1 || w < 1) throw ConfigError("model: input too small for the encoder depth");
    }
}

std::string ModelConfig::to_json() const {
    nlohmann::json j;
    j["input_channels"] = input_channels;
    j["input_bins"] = input_bins;
    j["input_frames"] = input_frames;
    j["encoder_channels"] = encoder_channels;
    j["embedding_dim"] = embedding_dim;
    j["head_widths"] = head_widths;
    j["dropout_p"] = dropout_p;
    j["leaky_slope"] = leaky_slope;
    j["normalize_input"] = normalize_input;
    return j.dump();
}

ModelConfig ModelConfig::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        ModelConfig cfg;
        cfg.input_channels = j.at("input_channels");
        cfg.input_bins = j.at("input_bins");
        cfg.input_frames = j.at("input_frames");
        cfg.encoder_channels = j.at("encoder_channels").get<std::vector<int>>();
        cfg.embedding_dim = j.at("embedding_dim");
        cfg.head_widths = j.at("head_widths").get<std::vector<int>>();
        cfg.dropout_p = j.at("dropout_p");
        cfg.leaky_slope = j.at("leaky_slope");
        cfg.normalize_input = j.at("normalize_input");
        cfg.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model config: invalid JSON: ") + e.what());
    }
}

std::size_t Model::add_param(const std::string& name, std::vector<int> dims) {
    std::size_t size = 1;
    for (const int d : dims) size *= static_cast<std::size_t>(d);
    const std::size_t offset = params_.size();
    params_.resize(offset + size, 0.0f);
    param_infos_.push_back({name, std::move(dims), offset, size});
    return offset;
}

std::size_t Model::add_buffer(const std::string& name, std::vector<int> dims) {
    std::size_t size = 1;
    for (const int d : dims) size *= static_cast<std::size_t>(d);
    const std::size_t offset = buffers_.size();
    buffers_.resize(offset + size, 0.0f);
    buffer_infos_.push_back({name, std::move(dims), offset, size});
    return offset;
}

Model::Model(const ModelConfig& cfg) : cfg_(cfg) {
    cfg_.validate();

    int h = cfg_.input_bins, w = cfg_.input_frames, c = cfg_.input_channels;
    for (std::size_t i = 0; i < cfg_.encoder_channels.size(); ++i) {
        ConvShape s;
        s.in_c = c;
        s.in_h = h;
        s.in_w = w;
        s.out_c = cfg_.encoder_channels[i];
        s.out_h = (h + 2 - 3) / 2 + 1;
        s.out_w = (w + 2 - 3) / 2 + 1;
        conv_shapes_.push_back(s);
        const std::string stage = "encoder.conv" + std::to_string(i);
        conv_w_.push_back(add_param(stage + ".weight", {s.out_c, 3, 3, s.in_c}));
        conv_b_.push_back(add_param(stage + ".bias", {s.out_c}));
        c = s.out_c;
        h = s.out_h;
        w = s.out_w;
    }
    embed_w_ = add_param("encoder.embed.weight", {cfg_.embedding_dim, c});
    embed_b_ = add_param("encoder.embed.bias", {cfg_.embedding_dim});

    int in_dim = cfg_.embedding_dim;
    for (std::size_t i = 0; i < cfg_.head_widths.size(); ++i) {
        HeadLayer layer;
        layer.in = in_dim;
        layer.out = cfg_.head_widths[i];
        const std::string stage = "head.linear" + std::to_string(i);
        layer.w = add_param(stage + ".weight", {layer.out, layer.in});
        layer.b = add_param(stage + ".bias", {layer.out});
        layer.has_bn = i + 1 < cfg_.head_widths.size();
        if (layer.has_bn) {
            const std::string bn = "head.bn" + std::to_string(i);
            layer.gamma = add_param(bn + ".gamma", {layer.out});
            layer.beta = add_param(bn + ".beta", {layer.out});
            layer.run_mean = add_buffer(bn + ".running_mean", {layer.out});
            layer.run_var = add_buffer(bn + ".running_var", {layer.out});
        }
        head_.push_back(layer);
        in_dim = layer.out;
    }

    // Per-sample activation arena: standardized input, each conv output,
    // pooled vector, embedding.
    std::size_t offset = 0;
    act_offsets_.push_back(offset);  // x0
    offset += input_size();
    max_act_ = input_size();
    cols_scratch_ = 0;
    for (const auto& s : conv_shapes_) {
        act_offsets_.push_back(offset);
        const auto n = static_cast<std::size_t>(s.out_c) * s.positions();
        offset += n;
        max_act_ = std::max(max_act_, n);
        cols_scratch_ = std::max(cols_scratch_, static_cast<std::size_t>(s.patch()) * s.positions());
    }
    gap_offset_ = offset;
    offset += static_cast<std::size_t>(conv_shapes_.back().out_c);
    emb_offset_ = offset;
    offset += static_cast<std::size_t>(cfg_.embedding_dim);
    acts_per_sample_ = offset;
}

std::span<float> Model::param(const std::string& name) {
    for (const auto& info : param_infos_)
        if (info.name == name) return {params_.data() + info.offset, info.size};
    for (const auto& info : buffer_infos_)
        if (info.name == name) return {buffers_.data() + info.offset, info.size};
    throw ArgumentError("model: unknown parameter: " + name);
}

void Model::init_weights(std::uint64_t seed) {
    for (const auto& info : param_infos_) {
        float* data = params_.data() + info.offset;
        if (info.name.ends_with(".bias") || info.name.ends_with(".beta")) {
            std::fill_n(data, info.size, 0.0f);
        } else if (info.name.ends_with(".gamma")) {
            std::fill_n(data, info.size, 1.0f);
        } else {
            // fan_in = product of all dims but the first (output) dim
            std::size_t fan_in = 1;
            for (std::size_t d = 1; d < info.dims.size(); ++d)
                fan_in *= static_cast<std::size_t>(info.dims[d]);
            const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
            const RandomStream rng(seed, "init-" + info.name);
            for (std::size_t i = 0; i < info.size; ++i)
                data[i] = static_cast<float>((2.0 * rng.uniform(i) - 1.0) * bound);
        }
    }
    for (const auto& info : buffer_infos_) {
        float* data = buffers_.data() + info.offset;
        std::fill_n(data, info.size, info.name.ends_with(".running_var") ? 1.0f : 0.0f);
    }
}

void Model::standardize_input(std::span<const float> window, float* out) const {
    // Also converts the planar [c][bin][frame] window into the
    // channel-interleaved layout the conv stages use.
    const int C = cfg_.input_channels;
    const int P = cfg_.input_bins * cfg_.input_frames;
    double mean = 0.0, var = 0.0;
    float scale = 1.0f, shift = 0.0f;
    if (cfg_.normalize_input) {
        for (const float v : window) mean += v;
        mean /= static_cast<double>(window.size());
        for (const float v : window) var += (v - mean) * (v - mean);
        var /= static_cast<double>(window.size());
        const double stddev = std::sqrt(var);
        scale = static_cast<float>(1.0 / (stddev + 1e-6));
        shift = static_cast<float>(mean);
    }
    for (int ci = 0; ci < C; ++ci) {
        const float* src = window.data() + static_cast<std::size_t>(ci) * P;
        for (int p = 0; p < P; ++p) out[ci + C * p] = (src[p] - shift) * scale;
    }
}

void Model::im2col(const ConvShape& s, const float* in, float* cols) const {
    const int K = s.patch();
    const std::size_t row_bytes = sizeof(float) * static_cast<std::size_t>(s.in_c);
    for (int oy = 0; oy < s.out_h; ++oy) {
        for (int ox = 0; ox < s.out_w; ++ox) {
            float* col = cols + static_cast<std::size_t>(oy * s.out_w + ox) * K;
            for (int ky = 0; ky < 3; ++ky) {
                const int iy = oy * 2 - 1 + ky;
                for (int kx = 0; kx < 3; ++kx) {
                    const int ix = ox * 2 - 1 + kx;
                    float* dst = col + static_cast<std::size_t>(ky * 3 + kx) * s.in_c;
                    if (iy < 0 || iy >= s.in_h || ix < 0 || ix >= s.in_w) {
                        std::memset(dst, 0, row_bytes);
                    } else {
                        std::memcpy(dst, in + static_cast<std::size_t>(iy * s.in_w + ix) * s.in_c, row_bytes);
                    }
                }
            }
        }
    }
}

void Model::conv_forward(const ConvShape& s, const float* w, const float* b, const float* in, float* out,
                         float* cols) const {
    im2col(s, in, cols);
    const int K = s.patch();
    const int P = s.positions();
    ConstMatMap wm(w, s.out_c, K);
    ConstMatMap cm(cols, K, P);
    MatMap om(out, s.out_c, P);
    om.noalias() = wm * cm;
    om.colwise() += ConstVecMap(b, s.out_c);
    leaky_relu_inplace(out, static_cast<std::size_t>(s.out_c) * P, cfg_.leaky_slope);
}

Model::EvalWorkspace Model::make_eval_workspace() const {
    EvalWorkspace ws;
    ws.act_a.resize(std::max(max_act_, input_size()));
    ws.act_b.resize(std::max(max_act_, input_size()));
    ws.cols.resize(cols_scratch_);
    std::size_t head_max = static_cast<std::size_t>(cfg_.embedding_dim);
    head_max = std::max(head_max, static_cast<std::size_t>(conv_shapes_.back().out_c));
    for (const auto& layer : head_) head_max = std::max(head_max, static_cast<std::size_t>(layer.out));
    ws.head.resize(2 * head_max);
    return ws;
}

void Model::forward(std::span<const float> window, std::span<float> probs, EvalWorkspace& ws) const {
    if (window.size() != input_size()) throw ArgumentError("model: window shape mismatch");
    if (probs.size() != static_cast<std::size_t>(kNumClasses))
        throw ArgumentError("model: probability output must have one entry per class");

    standardize_input(window, ws.act_a.data());
    float* cur = ws.act_a.data();
    float* nxt = ws.act_b.data();
    for (std::size_t i = 0; i < conv_shapes_.size(); ++i) {
        conv_forward(conv_shapes_[i], params_.data() + conv_w_[i], params_.data() + conv_b_[i], cur, nxt,
                     ws.cols.data());
        std::swap(cur, nxt);
    }

    const ConvShape& last = conv_shapes_.back();
    const int C = last.out_c;
    const int P = last.positions();
    const std::size_t half = ws.head.size() / 2;
    float* x = ws.head.data();
    float* y = ws.head.data() + half;

    for (int ci = 0; ci < C; ++ci) {
        double sum = 0.0;
        for (int p = 0; p < P; ++p) sum += cur[ci + C * p];
        x[ci] = static_cast<float>(sum / P);
    }

    // embedding linear + leaky ReLU
    {
        ConstMatMap wm(params_.data() + embed_w_, cfg_.embedding_dim, C);
        VecMap ym(y, cfg_.embedding_dim);
        ym.noalias() = wm * ConstVecMap(x, C);
        ym += ConstVecMap(params_.data() + embed_b_, cfg_.embedding_dim);
        leaky_relu_inplace(y, static_cast<std::size_t>(cfg_.embedding_dim), cfg_.leaky_slope);
        std::swap(x, y);
    }

    for (const auto& layer : head_) {
        VecMap ym(y, layer.out);
        ym.noalias() = ConstMatMap(params_.data() + layer.w, layer.out, layer.in) * ConstVecMap(x, layer.in);
        ym += ConstVecMap(params_.data() + layer.b, layer.out);
        if (layer.has_bn) {
            const float* gamma = params_.data() + layer.gamma;
            const float* beta = params_.data() + layer.beta;
            const float* rm = buffers_.data() + layer.run_mean;
            const float* rv = buffers_.data() + layer.run_var;
            for (int f = 0; f < layer.out; ++f)
                y[f] = gamma[f] * (y[f] - rm[f]) / std::sqrt(rv[f] + kBnEps) + beta[f];
            leaky_relu_inplace(y, static_cast<std::size_t>(layer.out), cfg_.leaky_slope);
        }
        std::swap(x, y);
    }

    // x holds the logits; stable softmax in double.
    std::array<double, kNumClasses> logits{}, p{};
    for (int i = 0; i < kNumClasses; ++i) logits[static_cast<std::size_t>(i)] = x[i];
    softmax(std::span<const double>(logits.data(), kNumClasses), std::span<double>(p.data(), kNumClasses));
    for (int i = 0; i < kNumClasses; ++i)
        probs[static_cast<std::size_t>(i)] = static_cast<float>(p[static_cast<std::size_t>(i)]);
}

void Model::encoder_forward_train(const float* window, float* acts, float* cols_scratch) const {
    standardize_input({window, input_size()}, acts + act_offsets_[0]);
    for (std::size_t i = 0; i < conv_shapes_.size(); ++i) {
        conv_forward(conv_shapes_[i], params_.data() + conv_w_[i], params_.data() + conv_b_[i],
                     acts + act_offsets_[i], acts + act_offsets_[i + 1], cols_scratch);
    }
    const ConvShape& last = conv_shapes_.back();
    const int C = last.out_c;
    const int P = last.positions();
    const float* a_last = acts + act_offsets_.back();
    float* gap = acts + gap_offset_;
    for (int ci = 0; ci < C; ++ci) {
        double sum = 0.0;
        for (int p = 0; p < P; ++p) sum += a_last[ci + C * p];
        gap[ci] = static_cast<float>(sum / P);
    }
    float* emb = acts + emb_offset_;
    VecMap em(emb, cfg_.embedding_dim);
    em.noalias() = ConstMatMap(params_.data() + embed_w_, cfg_.embedding_dim, C) * ConstVecMap(gap, C);
    em += ConstVecMap(params_.data() + embed_b_, cfg_.embedding_dim);
    leaky_relu_inplace(emb, static_cast<std::size_t>(cfg_.embedding_dim), cfg_.leaky_slope);
}

void Model::encoder_backward(const float* acts, const float* d_emb, std::span<float> grad,
                             float* cols_scratch, float* dcols_scratch, float* d_a, float* d_b) const {
    const ConvShape& last = conv_shapes_.back();
    const int C = last.out_c;
    const int P = last.positions();
    const float slope = cfg_.leaky_slope;

    // embedding linear (leaky ReLU applied to its output)
    std::vector<float> d_pre_emb(static_cast<std::size_t>(cfg_.embedding_dim));
    const float* emb = acts + emb_offset_;
    for (int i = 0; i < cfg_.embedding_dim; ++i)
        d_pre_emb[static_cast<std::size_t>(i)] = d_emb[i] * leaky_relu_grad(emb[i], slope);
    const float* gap = acts + gap_offset_;
    {
        MatMap dw(grad.data() + embed_w_, cfg_.embedding_dim, C);
        dw.noalias() += ConstVecMap(d_pre_emb.data(), cfg_.embedding_dim) * ConstVecMap(gap, C).transpose();
        VecMap(grad.data() + embed_b_, cfg_.embedding_dim) += ConstVecMap(d_pre_emb.data(), cfg_.embedding_dim);
    }
    std::vector<float> d_gap(static_cast<std::size_t>(C));
    VecMap(d_gap.data(), C).noalias() =
        ConstMatMap(params_.data() + embed_w_, cfg_.embedding_dim, C).transpose() *
        ConstVecMap(d_pre_emb.data(), cfg_.embedding_dim);

    // pooled mean -> spread the gradient evenly over positions
    float* d_out = d_a;
    const float inv_p = 1.0f / static_cast<float>(P);
    for (int p = 0; p < P; ++p)
        for (int ci = 0; ci < C; ++ci) d_out[ci + C * p] = d_gap[static_cast<std::size_t>(ci)] * inv_p;

    for (std::size_t stage = conv_shapes_.size(); stage-- > 0;) {
        const ConvShape& s = conv_shapes_[stage];
        const int K = s.patch();
        const int Pp = s.positions();
        const float* a_out = acts + act_offsets_[stage + 1];
        const float* a_in = acts + act_offsets_[stage];

        // through the activation
        for (std::size_t i = 0; i < static_cast<std::size_t>(s.out_c) * Pp; ++i)
            d_out[i] *= leaky_relu_grad(a_out[i], slope);

        im2col(s, a_in, cols_scratch);
        MatMap d_out_m(d_out, s.out_c, Pp);
        MatMap(grad.data() + conv_w_[stage], s.out_c, K).noalias() +=
            d_out_m * ConstMatMap(cols_scratch, K, Pp).transpose();
        VecMap(grad.data() + conv_b_[stage], s.out_c) += d_out_m.rowwise().sum();

        if (stage == 0) break;  // input gradient unused
        MatMap dcols(dcols_scratch, K, Pp);
        dcols.noalias() = ConstMatMap(params_.data() + conv_w_[stage], s.out_c, K).transpose() * d_out_m;

        // col2im scatter-add into the stage input gradient
        float* d_in = d_b;
        std::memset(d_in, 0, sizeof(float) * static_cast<std::size_t>(s.in_c) * s.in_h * s.in_w);
        for (int oy = 0; oy < s.out_h; ++oy) {
            for (int ox = 0; ox < s.out_w; ++ox) {
                const float* col = dcols_scratch + static_cast<std::size_t>(oy * s.out_w + ox) * K;
                for (int ky = 0; ky < 3; ++ky) {
                    const int iy = oy * 2 - 1 + ky;
                    if (iy < 0 || iy >= s.in_h) continue;
                    for (int kx = 0; kx < 3; ++kx) {
                        const int ix = ox * 2 - 1 + kx;
                        if (ix < 0 || ix >= s.in_w) continue;
                        const float* src = col + static_cast<std::size_t>(ky * 3 + kx) * s.in_c;
                        float* dst = d_in + static_cast<std::size_t>(iy * s.in_w + ix) * s.in_c;
                        for (int ci = 0; ci < s.in_c; ++ci) dst[ci] += src[ci];
                    }
                }
            }
        }
        std::swap(d_a, d_b);
        d_out = d_a;
    }
}

void Model::head_forward_train(const float* emb_batch, int batch, HeadTrainState& state,
                               const RandomStream& dropout_rng) {
    const int B = batch;
    state.batch = B;
    state.emb = emb_batch;
    const std::size_t n_layers = head_.size();
    state.x_hat.assign(n_layers, {});
    state.inv_std.assign(n_layers, {});
    state.mask.assign(n_layers, {});
    state.act.assign(n_layers, {});

    std::vector<float> cur(static_cast<std::size_t>(cfg_.embedding_dim) * B);
    std::memcpy(cur.data(), emb_batch, cur.size() * sizeof(float));
    std::uint64_t dropout_counter = 0;

    for (std::size_t li = 0; li < n_layers; ++li) {
        const HeadLayer& layer = head_[li];
        std::vector<float> z(static_cast<std::size_t>(layer.out) * B);
        MatMap zm(z.data(), layer.out, B);
        zm.noalias() = ConstMatMap(params_.data() + layer.w, layer.out, layer.in) *
                       ConstMatMap(cur.data(), layer.in, B);
        zm.colwise() += ConstVecMap(params_.data() + layer.b, layer.out);

        if (!layer.has_bn) {
            state.logits = std::move(z);
            return;
        }

        // batch norm over the batch axis, per feature
        auto& x_hat = state.x_hat[li];
        auto& inv_std = state.inv_std[li];
        x_hat.resize(z.size());
        inv_std.resize(static_cast<std::size_t>(layer.out));
        float* rm = buffers_.data() + layer.run_mean;
        float* rv = buffers_.data() + layer.run_var;
        const float* gamma = params_.data() + layer.gamma;
        const float* beta = params_.data() + layer.beta;
        for (int f = 0; f < layer.out; ++f) {
            double mean = 0.0;
            for (int i = 0; i < B; ++i) mean += z[static_cast<std::size_t>(f) + static_cast<std::size_t>(layer.out) * i];
            mean /= B;
            double var = 0.0;
            for (int i = 0; i < B; ++i) {
                const double d = z[static_cast<std::size_t>(f) + static_cast<std::size_t>(layer.out) * i] - mean;
                var += d * d;
            }
            var /= B;
            const double istd = 1.0 / std::sqrt(var + kBnEps);
            inv_std[static_cast<std::size_t>(f)] = static_cast<float>(istd);
            const double unbiased = B > 1 ? var * B / (B - 1.0) : var;
            rm[f] = (1.0f - kBnMomentum) * rm[f] + kBnMomentum * static_cast<float>(mean);
            rv[f] = (1.0f - kBnMomentum) * rv[f] + kBnMomentum * static_cast<float>(unbiased);
            for (int i = 0; i < B; ++i) {
                const std::size_t idx = static_cast<std::size_t>(f) + static_cast<std::size_t>(layer.out) * i;
                const double xh = (z[idx] - mean) * istd;
                x_hat[idx] = static_cast<float>(xh);
                z[idx] = static_cast<float>(gamma[f] * xh + beta[f]);
            }
        }

        // dropout (inverted scaling), then leaky ReLU
        auto& mask = state.mask[li];
        mask.resize(z.size());
        const float keep_scale = 1.0f / (1.0f - cfg_.dropout_p);
        for (std::size_t idx = 0; idx < z.size(); ++idx) {
            const bool keep = cfg_.dropout_p == 0.0f ||
                              dropout_rng.uniform(dropout_counter + idx) >= cfg_.dropout_p;
            mask[idx] = keep ? keep_scale : 0.0f;
            z[idx] *= mask[idx];
        }
        dropout_counter += z.size();
        leaky_relu_inplace(z.data(), z.size(), cfg_.leaky_slope);
        state.act[li] = z;
        cur = std::move(z);
    }
}

void Model::head_backward(const HeadTrainState& state, const float* d_logits, float* d_emb,
                          std::span<float> grad) const {
    const int B = state.batch;
    const std::size_t n_layers = head_.size();

    std::vector<float> d_cur(static_cast<std::size_t>(head_.back().out) * B);
    std::memcpy(d_cur.data(), d_logits, d_cur.size() * sizeof(float));

    for (std::size_t li = n_layers; li-- > 0;) {
        const HeadLayer& layer = head_[li];
        // input to this layer: previous hidden activation or the embeddings
        const float* input = li == 0 ? state.emb : state.act[li - 1].data();

        if (layer.has_bn) {
            // d_cur currently holds the gradient at the layer's final output
            // (post leaky ReLU); walk back through relu -> dropout -> BN.
            const auto& act = state.act[li];
            const auto& mask = state.mask[li];
            const auto& x_hat = state.x_hat[li];
            const auto& inv_std = state.inv_std[li];
            const float* gamma = params_.data() + layer.gamma;
            for (std::size_t idx = 0; idx < d_cur.size(); ++idx)
                d_cur[idx] *= leaky_relu_grad(act[idx], cfg_.leaky_slope) * mask[idx];
            // BN backward per feature
            float* d_gamma = grad.data() + layer.gamma;
            float* d_beta = grad.data() + layer.beta;
            for (int f = 0; f < layer.out; ++f) {
                double sum_dy = 0.0, sum_dy_xhat = 0.0;
                for (int i = 0; i < B; ++i) {
                    const std::size_t idx = static_cast<std::size_t>(f) + static_cast<std::size_t>(layer.out) * i;
                    sum_dy += d_cur[idx];
                    sum_dy_xhat += static_cast<double>(d_cur[idx]) * x_hat[idx];
                }
                d_gamma[f] += static_cast<float>(sum_dy_xhat);
                d_beta[f] += static_cast<float>(sum_dy);
                const double gi = gamma[f] * inv_std[static_cast<std::size_t>(f)];
                for (int i = 0; i < B; ++i) {
                    const std::size_t idx = static_cast<std::size_t>(f) + static_cast<std::size_t>(layer.out) * i;
                    d_cur[idx] = static_cast<float>(
                        gi * (d_cur[idx] - sum_dy / B - x_hat[idx] * sum_dy_xhat / B));
                }
            }
        }

        MatMap d_z(d_cur.data(), layer.out, B);
        MatMap(grad.data() + layer.w, layer.out, layer.in).noalias() +=
            d_z * ConstMatMap(input, layer.in, B).transpose();
        VecMap(grad.data() + layer.b, layer.out) += d_z.rowwise().sum();

        std::vector<float> d_prev(static_cast<std::size_t>(layer.in) * B);
        MatMap(d_prev.data(), layer.in, B).noalias() =
            ConstMatMap(params_.data() + layer.w, layer.out, layer.in).transpose() * d_z;
        d_cur = std::move(d_prev);
    }
    std::memcpy(d_emb, d_cur.data(), d_cur.size() * sizeof(float));
}

}  // namespace dietsonar::nn
