#include "dietsonar/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include "dietsonar/metrics/metrics.hpp"
#include "dietsonar/parallel.hpp"

namespace dietsonar::nn {

namespace {

constexpr std::int64_t kSampleChunk = 8;

void check_window_shapes(const std::vector<data::WindowedSample>& samples, const ModelConfig& cfg,
                         const char* what) {
    for (const auto& s : samples) {
        if (s.n_channels != cfg.input_channels || s.n_bins != cfg.input_bins ||
            s.n_frames != cfg.input_frames)
            throw ArgumentError(std::string(what) + ": window shape does not match the model config");
    }
}

}  // namespace

std::array<double, kNumClasses> inverse_frequency_alpha(const std::vector<data::WindowedSample>& samples) {
    std::array<std::int64_t, kNumClasses> counts{};
    for (const auto& s : samples) ++counts[static_cast<std::size_t>(s.label)];
    std::array<double, kNumClasses> alpha{};
    double sum = 0.0;
    int present = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) {
            alpha[static_cast<std::size_t>(c)] = 1.0 / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            sum += alpha[static_cast<std::size_t>(c)];
            ++present;
        }
    }
    for (int c = 0; c < kNumClasses; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0)
            alpha[static_cast<std::size_t>(c)] *= static_cast<double>(present) / sum;
        else
            alpha[static_cast<std::size_t>(c)] = 1.0;
    }
    return alpha;
}

FramePredictions predict(const Model& model, const std::vector<data::WindowedSample>& windows) {
    check_window_shapes(windows, model.config(), "predict");
    FramePredictions preds(windows.size());
    parallel_chunks(static_cast<std::int64_t>(windows.size()), 16,
                    [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                        auto ws = model.make_eval_workspace();
                        std::array<float, kNumClasses> probs{};
                        for (std::int64_t i = begin; i < end; ++i) {
                            const auto& w = windows[static_cast<std::size_t>(i)];
                            model.forward(w.tensor, probs, ws);
                            auto& p = preds[static_cast<std::size_t>(i)];
                            p.start_time_s = w.start_time_s;
                            p.probs = probs;
                            int best = 0;
                            for (int c = 1; c < kNumClasses; ++c)
                                if (probs[static_cast<std::size_t>(c)] > probs[static_cast<std::size_t>(best)])
                                    best = c;
                            p.label = static_cast<ActivityClass>(best);
                        }
                    });
    return preds;
}

namespace {

double validation_macro_f1(const Model& model, const std::vector<data::WindowedSample>& val) {
    const auto preds = predict(model, val);
    std::vector<ActivityClass> truth(val.size()), inferred(val.size());
    for (std::size_t i = 0; i < val.size(); ++i) {
        truth[i] = val[i].label;
        inferred[i] = preds[i].label;
    }
    return metrics::macro_f1(metrics::confusion(truth, inferred)).macro_f1;
}

}  // namespace

TrainResult train(const std::vector<data::WindowedSample>& train_samples,
                  const std::vector<data::WindowedSample>& val_samples, const ModelConfig& model_cfg,
                  const TrainConfig& train_cfg, const FocalLossConfig& focal_cfg) {
    model_cfg.validate();
    train_cfg.validate();
    focal_cfg.validate();
    if (train_samples.empty()) throw ArgumentError("train: empty training split");
    check_window_shapes(train_samples, model_cfg, "train");
    check_window_shapes(val_samples, model_cfg, "validation");

    TrainResult result{Model(model_cfg), {}, -1, 0.0, 0, {}};
    Model& model = result.model;
    model.init_weights(train_cfg.seed);

    FocalLossConfig focal = focal_cfg;
    if (focal.alpha.empty()) {
        const auto alpha = inverse_frequency_alpha(train_samples);
        focal.alpha.assign(alpha.begin(), alpha.end());
    }
    std::copy(focal.alpha.begin(), focal.alpha.end(), result.alpha.begin());

    const auto n = static_cast<std::int64_t>(train_samples.size());
    const int batch_size = train_cfg.batch_size;
    result.batches_per_epoch = static_cast<int>((n + batch_size - 1) / batch_size);

    AdamState opt(model.params().size(), train_cfg.beta1, train_cfg.beta2, train_cfg.eps);
    std::vector<float> grad(model.params().size());
    const std::size_t aps = model.acts_floats_per_sample();
    std::vector<float> arena(static_cast<std::size_t>(std::min<std::int64_t>(batch_size, n)) * aps);
    const int emb_dim = model_cfg.embedding_dim;
    std::vector<float> emb_batch(static_cast<std::size_t>(emb_dim) * batch_size);
    std::vector<float> d_emb(static_cast<std::size_t>(emb_dim) * batch_size);
    std::vector<float> d_logits(static_cast<std::size_t>(kNumClasses) * batch_size);
    const auto max_chunks =
        static_cast<std::size_t>((std::min<std::int64_t>(batch_size, n) + kSampleChunk - 1) / kSampleChunk);
    std::vector<std::vector<float>> chunk_grads(max_chunks);

    std::vector<std::int64_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    std::vector<float> best_params, best_buffers;
    Model::HeadTrainState head_state;

    for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
        const double lr = cosine_lr(epoch, train_cfg);
        seeded_shuffle(order, train_cfg.seed, "shuffle-epoch-" + std::to_string(epoch));

        double loss_sum = 0.0;
        int step = 0;
        for (std::int64_t base = 0; base < n; base += batch_size, ++step) {
            const int B = static_cast<int>(std::min<std::int64_t>(batch_size, n - base));
            std::fill(grad.begin(), grad.end(), 0.0f);

            parallel_chunks(B, kSampleChunk, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                std::vector<float> cols(model.cols_scratch_floats());
                for (std::int64_t i = begin; i < end; ++i) {
                    const auto& sample = train_samples[static_cast<std::size_t>(order[static_cast<std::size_t>(base + i)])];
                    float* acts = arena.data() + static_cast<std::size_t>(i) * aps;
                    model.encoder_forward_train(sample.tensor.data(), acts, cols.data());
                    std::memcpy(emb_batch.data() + static_cast<std::size_t>(i) * emb_dim,
                                acts + model.embedding_offset(), sizeof(float) * static_cast<std::size_t>(emb_dim));
                }
            });

            const RandomStream dropout_rng(
                train_cfg.seed, RandomStream::hash_name("dropout") +
                                    static_cast<std::uint64_t>(epoch) * 1000003ULL +
                                    static_cast<std::uint64_t>(step));
            model.head_forward_train(emb_batch.data(), B, head_state, dropout_rng);

            // per-sample focal loss and logit gradients (mean reduction)
            std::array<double, kNumClasses> logits_d{}, probs_d{}, dlog_d{};
            for (int i = 0; i < B; ++i) {
                for (int c = 0; c < kNumClasses; ++c)
                    logits_d[static_cast<std::size_t>(c)] =
                        head_state.logits[static_cast<std::size_t>(c) + static_cast<std::size_t>(kNumClasses) * i];
                softmax(logits_d, probs_d);
                const auto& sample =
                    train_samples[static_cast<std::size_t>(order[static_cast<std::size_t>(base + i)])];
                const int target = static_cast<int>(sample.label);
                const double loss = focal_loss(probs_d, target, focal);
                if (!std::isfinite(loss)) throw TrainingError("train: non-finite loss (divergence)");
                loss_sum += loss;
                focal_loss_grad_logits(probs_d, target, focal, dlog_d);
                for (int c = 0; c < kNumClasses; ++c)
                    d_logits[static_cast<std::size_t>(c) + static_cast<std::size_t>(kNumClasses) * i] =
                        static_cast<float>(dlog_d[static_cast<std::size_t>(c)] / B);
            }

            model.head_backward(head_state, d_logits.data(), d_emb.data(), grad);

            const auto n_chunks = static_cast<std::size_t>((B + kSampleChunk - 1) / kSampleChunk);
            parallel_chunks(B, kSampleChunk, [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
                auto& cg = chunk_grads[static_cast<std::size_t>(chunk)];
                cg.assign(model.params().size(), 0.0f);
                std::vector<float> cols(model.cols_scratch_floats());
                std::vector<float> dcols(model.cols_scratch_floats());
                std::vector<float> d_a(model.act_buffer_floats());
                std::vector<float> d_b(model.act_buffer_floats());
                for (std::int64_t i = begin; i < end; ++i) {
                    model.encoder_backward(arena.data() + static_cast<std::size_t>(i) * aps,
                                           d_emb.data() + static_cast<std::size_t>(i) * emb_dim, cg,
                                           cols.data(), dcols.data(), d_a.data(), d_b.data());
                }
            });
            for (std::size_t k = 0; k < n_chunks; ++k) {
                const auto& cg = chunk_grads[k];
                for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += cg[j];
            }

            adam_step(opt, model.params(), grad, lr);
        }

        EpochLog entry;
        entry.epoch = epoch;
        entry.mean_loss = loss_sum / static_cast<double>(n);
        entry.lr = lr;
        entry.val_macro_f1 = val_samples.empty() ? std::nan("") : validation_macro_f1(model, val_samples);
        result.log.push_back(entry);

        if (!val_samples.empty() &&
            (result.best_epoch < 0 || entry.val_macro_f1 > result.best_val_macro_f1)) {
            result.best_epoch = epoch;
            result.best_val_macro_f1 = entry.val_macro_f1;
            best_params.assign(model.params().begin(), model.params().end());
            best_buffers.assign(model.buffers().begin(), model.buffers().end());
        }
    }

    if (!best_params.empty()) {
        std::copy(best_params.begin(), best_params.end(), model.params().begin());
        std::copy(best_buffers.begin(), best_buffers.end(), model.buffers().begin());
    } else {
        result.best_epoch = train_cfg.epochs - 1;
    }
    return result;
}

std::pair<std::vector<data::WindowedSample>, std::vector<data::WindowedSample>> split_validation(
    std::vector<data::WindowedSample> samples, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0)) throw ConfigError("split_validation: fraction must be in [0, 1)");
    std::vector<data::WindowedSample> rest, held;
    if (fraction == 0.0 || samples.empty()) return {std::move(samples), {}};

    std::vector<char> is_held(samples.size(), 0);
    for (const auto& group : data::group_ids(samples)) {
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (samples[i].group == group) indices.push_back(i);
        const auto k = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(indices.size())));
        seeded_shuffle(indices, seed, "val-split-" + group);
        for (std::size_t i = 0; i < k; ++i) is_held[indices[i]] = 1;
    }
    for (std::size_t i = 0; i < samples.size(); ++i)
        (is_held[i] ? held : rest).push_back(std::move(samples[i]));
    return {std::move(rest), std::move(held)};
}

std::string train_log_to_jsonl(const std::vector<EpochLog>& log) {
    std::ostringstream out;
    out.precision(12);
    for (const auto& e : log) {
        out << "{\"epoch\":" << e.epoch << ",\"loss\":" << e.mean_loss << ",\"lr\":" << e.lr;
        if (std::isnan(e.val_macro_f1))
            out << ",\"val_macro_f1\":null}";
        else
            out << ",\"val_macro_f1\":" << e.val_macro_f1 << "}";
        out << '\n';
    }
    return out.str();
}

}  // namespace dietsonar::nn
