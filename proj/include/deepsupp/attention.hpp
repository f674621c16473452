#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "deepsupp/correlation.hpp"
#include "deepsupp/matrix.hpp"

namespace deepsupp {

struct ModelConfig {
    std::size_t heads = 4;
    std::size_t embed_dim = 32;       // attention width == padded matrix dimension
    std::size_t bottleneck_dim = 16;  // encoder output
    std::size_t hidden_dim = 24;      // encoder/decoder hidden width
    std::uint64_t seed = 1;
    double learning_rate = 1.0;  // SGD + momentum 0.9 on the mean-squared loss
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
};

// Throws std::invalid_argument on bad configs (embed_dim not divisible by
// heads, bottleneck >= embed, zero sizes, non-positive learning rate).
void validate_config(const ModelConfig& config);

// Multi-head attention block (no positional encoding, no projection biases)
// followed by residual + layer norm, a mean-pool over positions, a two-layer
// ReLU encoder to the bottleneck, the mirrored decoder back to embed_dim,
// and a learned per-position affine that expands the decoded vector into the
// full reconstruction.
struct Model {
    ModelConfig config;

    std::vector<Mat> wq, wk, wv;  // per head: embed_dim x head_dim
    Mat wo;                       // embed_dim x embed_dim
    std::vector<double> ln_gain, ln_bias;

    Mat enc_w1;                  // hidden x embed
    std::vector<double> enc_b1;
    Mat enc_w2;                  // bottleneck x hidden
    std::vector<double> enc_b2;

    Mat dec_w1;                  // hidden x bottleneck
    std::vector<double> dec_b1;
    Mat dec_w2;                  // embed x hidden
    std::vector<double> dec_b2;

    Mat bc_gain;  // embed x embed: reconstruction(i,j) = gain(i,j)*u(j) + bias(i,j)
    Mat bc_bias;

    std::size_t head_dim() const { return config.embed_dim / config.heads; }
};

// Visits every parameter tensor in the canonical (checkpoint) order.
void for_each_tensor(Model& model,
                     const std::function<void(const char*, double*, std::size_t)>& fn);

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) matmul weights, zero biases,
// unit layer-norm/broadcast gains. Deterministic per config.seed.
Model init_model(const ModelConfig& config);

struct AttentionResult {
    Mat output;               // embed x embed, after residual + layer norm
    std::vector<Mat> weights;  // per head, row-stochastic embed x embed
};

// Rows of `input` are the sequence positions. Throws on non-finite input
// or shape mismatch.
AttentionResult multi_head_attention(const Model& model, const Mat& input);

struct Embedding {
    std::size_t window_end = 0;
    std::vector<double> values;
};

Embedding encode(const Model& model, const Mat& input);
Mat decode(const Model& model, const Embedding& embedding);

// Mean squared reconstruction error over all matrix entries.
double reconstruction_loss(const Model& model, const Mat& input);

struct TrainResult {
    Model model;
    std::vector<double> loss_trace;  // per-epoch mean sample loss
};

// Mini-batch SGD with momentum 0.9 over the padded correlation matrices;
// batch order is reshuffled each epoch from config.seed. Aborts with the
// epoch number if the loss goes non-finite.
TrainResult train(const Model& model, const CorrSequence& sequence,
                  const ModelConfig& config);

// Central finite differences (step 1e-5) against the analytic gradient on
// `samples_per_tensor` randomly chosen entries of every parameter tensor.
// Returns max |ga - gn| / max(|ga|, |gn|, 1e-8).
double gradient_check(const Model& model, const Mat& input,
                      std::size_t samples_per_tensor = 5,
                      std::uint64_t sample_seed = 12345);

std::vector<Embedding> embed_sequence(const Model& model, const CorrSequence& sequence);

// Attention maps for one window; throws if window_end is not present.
std::vector<Mat> attention_weight_maps(const Model& model, const CorrSequence& sequence,
                                       std::size_t window_end);

// Writes one CSV per head: <dir>/<prefix>_head<k>.csv. Returns the paths.
std::vector<std::string> export_attention_weights(const Model& model,
                                                  const CorrSequence& sequence,
                                                  std::size_t window_end,
                                                  const std::string& dir,
                                                  const std::string& prefix);

// Flat binary checkpoint: magic, version, config block, then the parameter
// tensors in canonical order as little-endian 64-bit floats.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace deepsupp
