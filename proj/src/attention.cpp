#include "deepsupp/attention.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "deepsupp/rng.hpp"

namespace deepsupp {

namespace {

constexpr double kMomentum = 0.9;
constexpr double kLnEps = 1e-5;

void check_input(const Model& m, const Mat& input) {
    std::size_t d = m.config.embed_dim;
    if (input.rows != d || input.cols != d)
        throw std::invalid_argument("attention input must be " + std::to_string(d) +
                                    "x" + std::to_string(d));
    for (double v : input.a)
        if (!std::isfinite(v))
            throw std::invalid_argument("attention input contains non-finite values");
}

struct Forward {
    // attention
    std::vector<Mat> q, k, v, attn, head_out;
    Mat concat;    // S x D
    Mat proj;      // S x D
    Mat resid;     // S x D
    std::vector<double> mu, inv_std;
    Mat xhat;      // normalized resid, pre gain/bias
    Mat y;         // attention block output
    // encoder
    std::vector<double> pooled, enc_pre, enc_h, z;
    // decoder
    std::vector<double> dec_pre, dec_h, u;
    Mat recon;
};

void softmax_rows(Mat& m) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        double mx = m(i, 0);
        for (std::size_t j = 1; j < m.cols; ++j)
            mx = std::max(mx, m(i, j));
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) {
            double e = std::exp(m(i, j) - mx);
            m(i, j) = e;
            sum += e;
        }
        for (std::size_t j = 0; j < m.cols; ++j)
            m(i, j) /= sum;
    }
}

void attention_forward(const Model& m, const Mat& x, Forward& f) {
    const std::size_t S = m.config.embed_dim;
    const std::size_t H = m.config.heads;
    const std::size_t hd = m.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

    f.q.resize(H);
    f.k.resize(H);
    f.v.resize(H);
    f.attn.resize(H);
    f.head_out.resize(H);
    f.concat = Mat(S, S);
    for (std::size_t h = 0; h < H; ++h) {
        f.q[h] = matmul(x, m.wq[h]);
        f.k[h] = matmul(x, m.wk[h]);
        f.v[h] = matmul(x, m.wv[h]);
        Mat scores = matmul_nt(f.q[h], f.k[h]);
        for (double& s : scores.a)
            s *= scale;
        softmax_rows(scores);
        f.attn[h] = std::move(scores);
        f.head_out[h] = matmul(f.attn[h], f.v[h]);
        for (std::size_t i = 0; i < S; ++i)
            for (std::size_t j = 0; j < hd; ++j)
                f.concat(i, h * hd + j) = f.head_out[h](i, j);
    }
    f.proj = matmul(f.concat, m.wo);
    f.resid = f.proj;
    for (std::size_t i = 0; i < x.size(); ++i)
        f.resid.a[i] += x.a[i];

    f.mu.resize(S);
    f.inv_std.resize(S);
    f.xhat = Mat(S, S);
    f.y = Mat(S, S);
    for (std::size_t i = 0; i < S; ++i) {
        double mu = 0.0;
        for (std::size_t j = 0; j < S; ++j)
            mu += f.resid(i, j);
        mu /= static_cast<double>(S);
        double var = 0.0;
        for (std::size_t j = 0; j < S; ++j) {
            double d = f.resid(i, j) - mu;
            var += d * d;
        }
        var /= static_cast<double>(S);
        double istd = 1.0 / std::sqrt(var + kLnEps);
        f.mu[i] = mu;
        f.inv_std[i] = istd;
        for (std::size_t j = 0; j < S; ++j) {
            double xh = (f.resid(i, j) - mu) * istd;
            f.xhat(i, j) = xh;
            f.y(i, j) = m.ln_gain[j] * xh + m.ln_bias[j];
        }
    }
}

std::vector<double> affine(const Mat& w, const std::vector<double>& x,
                           const std::vector<double>& b) {
    std::vector<double> out(w.rows);
    for (std::size_t i = 0; i < w.rows; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < w.cols; ++j)
            s += w(i, j) * x[j];
        out[i] = s;
    }
    return out;
}

void full_forward(const Model& m, const Mat& x, Forward& f) {
    const std::size_t S = m.config.embed_dim;
    attention_forward(m, x, f);

    f.pooled.assign(S, 0.0);
    for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < S; ++j)
            f.pooled[j] += f.y(i, j);
    for (double& p : f.pooled)
        p /= static_cast<double>(S);

    f.enc_pre = affine(m.enc_w1, f.pooled, m.enc_b1);
    f.enc_h = f.enc_pre;
    for (double& h : f.enc_h)
        h = std::max(h, 0.0);
    f.z = affine(m.enc_w2, f.enc_h, m.enc_b2);

    f.dec_pre = affine(m.dec_w1, f.z, m.dec_b1);
    f.dec_h = f.dec_pre;
    for (double& h : f.dec_h)
        h = std::max(h, 0.0);
    f.u = affine(m.dec_w2, f.dec_h, m.dec_b2);

    f.recon = Mat(S, S);
    for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < S; ++j)
            f.recon(i, j) = m.bc_gain(i, j) * f.u[j] + m.bc_bias(i, j);
}

double mse(const Mat& a, const Mat& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a.a[i] - b.a[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

struct Grads {
    Model g;  // same shapes as the model, holding gradients

    explicit Grads(const Model& like) : g(like) { zero(); }

    void zero() {
        for_each_tensor(g, [](const char*, double* p, std::size_t n) {
            std::fill(p, p + n, 0.0);
        });
    }
};

// Backprop of the reconstruction MSE through the full forward pass.
// Gradients are accumulated into `grads`.
void backward(const Model& m, const Mat& x, const Forward& f, Model& grads) {
    const std::size_t S = m.config.embed_dim;
    const std::size_t H = m.config.heads;
    const std::size_t hd = m.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
    const double inv_n = 1.0 / static_cast<double>(S * S);

    // loss -> reconstruction -> broadcast affine
    std::vector<double> du(S, 0.0);
    for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = 0; j < S; ++j) {
            double dr = 2.0 * (f.recon(i, j) - x(i, j)) * inv_n;
            grads.bc_gain(i, j) += dr * f.u[j];
            grads.bc_bias(i, j) += dr;
            du[j] += dr * m.bc_gain(i, j);
        }
    }

    // decoder
    std::vector<double> dh2(m.config.hidden_dim, 0.0);
    for (std::size_t j = 0; j < S; ++j) {
        grads.dec_b2[j] += du[j];
        for (std::size_t k = 0; k < m.config.hidden_dim; ++k) {
            grads.dec_w2(j, k) += du[j] * f.dec_h[k];
            dh2[k] += m.dec_w2(j, k) * du[j];
        }
    }
    std::vector<double> dz(m.config.bottleneck_dim, 0.0);
    for (std::size_t k = 0; k < m.config.hidden_dim; ++k) {
        double d = f.dec_pre[k] > 0.0 ? dh2[k] : 0.0;
        grads.dec_b1[k] += d;
        for (std::size_t l = 0; l < m.config.bottleneck_dim; ++l) {
            grads.dec_w1(k, l) += d * f.z[l];
            dz[l] += m.dec_w1(k, l) * d;
        }
    }

    // encoder
    std::vector<double> dh1(m.config.hidden_dim, 0.0);
    for (std::size_t l = 0; l < m.config.bottleneck_dim; ++l) {
        grads.enc_b2[l] += dz[l];
        for (std::size_t k = 0; k < m.config.hidden_dim; ++k) {
            grads.enc_w2(l, k) += dz[l] * f.enc_h[k];
            dh1[k] += m.enc_w2(l, k) * dz[l];
        }
    }
    std::vector<double> dv(S, 0.0);
    for (std::size_t k = 0; k < m.config.hidden_dim; ++k) {
        double d = f.enc_pre[k] > 0.0 ? dh1[k] : 0.0;
        grads.enc_b1[k] += d;
        for (std::size_t j = 0; j < S; ++j) {
            grads.enc_w1(k, j) += d * f.pooled[j];
            dv[j] += m.enc_w1(k, j) * d;
        }
    }

    // mean pool -> layer norm
    Mat dresid(S, S);
    const double inv_s = 1.0 / static_cast<double>(S);
    for (std::size_t i = 0; i < S; ++i) {
        double mean_dxhat = 0.0;
        double mean_dxhat_xhat = 0.0;
        std::vector<double> dxhat(S);
        for (std::size_t j = 0; j < S; ++j) {
            double dy = dv[j] * inv_s;  // pooled gradient spread over positions
            grads.ln_gain[j] += dy * f.xhat(i, j);
            grads.ln_bias[j] += dy;
            dxhat[j] = dy * m.ln_gain[j];
            mean_dxhat += dxhat[j];
            mean_dxhat_xhat += dxhat[j] * f.xhat(i, j);
        }
        mean_dxhat *= inv_s;
        mean_dxhat_xhat *= inv_s;
        for (std::size_t j = 0; j < S; ++j)
            dresid(i, j) = f.inv_std[i] *
                           (dxhat[j] - mean_dxhat - f.xhat(i, j) * mean_dxhat_xhat);
    }

    // residual add passes dresid straight into the projection
    Mat g_wo = matmul_tn(f.concat, dresid);
    for (std::size_t i = 0; i < g_wo.size(); ++i)
        grads.wo.a[i] += g_wo.a[i];
    Mat dconcat = matmul_nt(dresid, m.wo);

    for (std::size_t h = 0; h < H; ++h) {
        Mat dout(S, hd);
        for (std::size_t i = 0; i < S; ++i)
            for (std::size_t j = 0; j < hd; ++j)
                dout(i, j) = dconcat(i, h * hd + j);

        Mat dattn = matmul_nt(dout, f.v[h]);
        Mat dvh = matmul_tn(f.attn[h], dout);

        // softmax rows: ds = a .* (da - sum(da .* a))
        Mat dscore(S, S);
        for (std::size_t i = 0; i < S; ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < S; ++j)
                dot += dattn(i, j) * f.attn[h](i, j);
            for (std::size_t j = 0; j < S; ++j)
                dscore(i, j) = f.attn[h](i, j) * (dattn(i, j) - dot);
        }
        for (double& d : dscore.a)
            d *= scale;

        Mat dq = matmul(dscore, f.k[h]);
        Mat dk = matmul_tn(dscore, f.q[h]);

        Mat g_wq = matmul_tn(x, dq);
        Mat g_wk = matmul_tn(x, dk);
        Mat g_wv = matmul_tn(x, dvh);
        for (std::size_t i = 0; i < g_wq.size(); ++i) {
            grads.wq[h].a[i] += g_wq.a[i];
            grads.wk[h].a[i] += g_wk.a[i];
            grads.wv[h].a[i] += g_wv.a[i];
        }
    }
}

}  // namespace

void validate_config(const ModelConfig& c) {
    if (c.heads == 0 || c.embed_dim == 0 || c.bottleneck_dim == 0 || c.hidden_dim == 0)
        throw std::invalid_argument("model config: dimensions must be positive");
    if (c.embed_dim % c.heads != 0)
        throw std::invalid_argument("model config: embed_dim " +
                                    std::to_string(c.embed_dim) +
                                    " not divisible by heads " + std::to_string(c.heads));
    if (c.bottleneck_dim >= c.embed_dim)
        throw std::invalid_argument("model config: bottleneck must be < embed_dim");
    if (!(c.learning_rate > 0.0))
        throw std::invalid_argument("model config: learning rate must be positive");
    if (c.epochs == 0 || c.batch_size == 0)
        throw std::invalid_argument("model config: epochs and batch_size must be >= 1");
}

void for_each_tensor(Model& m,
                     const std::function<void(const char*, double*, std::size_t)>& fn) {
    for (std::size_t h = 0; h < m.config.heads; ++h)
        fn("wq", m.wq[h].a.data(), m.wq[h].size());
    for (std::size_t h = 0; h < m.config.heads; ++h)
        fn("wk", m.wk[h].a.data(), m.wk[h].size());
    for (std::size_t h = 0; h < m.config.heads; ++h)
        fn("wv", m.wv[h].a.data(), m.wv[h].size());
    fn("wo", m.wo.a.data(), m.wo.size());
    fn("ln_gain", m.ln_gain.data(), m.ln_gain.size());
    fn("ln_bias", m.ln_bias.data(), m.ln_bias.size());
    fn("enc_w1", m.enc_w1.a.data(), m.enc_w1.size());
    fn("enc_b1", m.enc_b1.data(), m.enc_b1.size());
    fn("enc_w2", m.enc_w2.a.data(), m.enc_w2.size());
    fn("enc_b2", m.enc_b2.data(), m.enc_b2.size());
    fn("dec_w1", m.dec_w1.a.data(), m.dec_w1.size());
    fn("dec_b1", m.dec_b1.data(), m.dec_b1.size());
    fn("dec_w2", m.dec_w2.a.data(), m.dec_w2.size());
    fn("dec_b2", m.dec_b2.data(), m.dec_b2.size());
    fn("bc_gain", m.bc_gain.a.data(), m.bc_gain.size());
    fn("bc_bias", m.bc_bias.a.data(), m.bc_bias.size());
}

Model init_model(const ModelConfig& config) {
    validate_config(config);
    Model m;
    m.config = config;
    const std::size_t D = config.embed_dim;
    const std::size_t hd = D / config.heads;

    Rng rng(derive_seed(config.seed, 0));
    auto uniform_fill = [&](Mat& w, std::size_t fan_in) {
        double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : w.a)
            v = rng.uniform(-bound, bound);
    };

    m.wq.assign(config.heads, Mat(D, hd));
    m.wk.assign(config.heads, Mat(D, hd));
    m.wv.assign(config.heads, Mat(D, hd));
    for (auto& w : m.wq)
        uniform_fill(w, D);
    for (auto& w : m.wk)
        uniform_fill(w, D);
    for (auto& w : m.wv)
        uniform_fill(w, D);
    m.wo = Mat(D, D);
    uniform_fill(m.wo, D);
    m.ln_gain.assign(D, 1.0);
    m.ln_bias.assign(D, 0.0);

    m.enc_w1 = Mat(config.hidden_dim, D);
    uniform_fill(m.enc_w1, D);
    m.enc_b1.assign(config.hidden_dim, 0.0);
    m.enc_w2 = Mat(config.bottleneck_dim, config.hidden_dim);
    uniform_fill(m.enc_w2, config.hidden_dim);
    m.enc_b2.assign(config.bottleneck_dim, 0.0);

    m.dec_w1 = Mat(config.hidden_dim, config.bottleneck_dim);
    uniform_fill(m.dec_w1, config.bottleneck_dim);
    m.dec_b1.assign(config.hidden_dim, 0.0);
    m.dec_w2 = Mat(D, config.hidden_dim);
    uniform_fill(m.dec_w2, config.hidden_dim);
    m.dec_b2.assign(D, 0.0);

    m.bc_gain = Mat(D, D);
    m.bc_gain.fill(1.0);
    m.bc_bias = Mat(D, D);
    return m;
}

AttentionResult multi_head_attention(const Model& m, const Mat& input) {
    check_input(m, input);
    Forward f;
    attention_forward(m, input, f);
    return {std::move(f.y), std::move(f.attn)};
}

Embedding encode(const Model& m, const Mat& input) {
    check_input(m, input);
    Forward f;
    full_forward(m, input, f);
    return {0, std::move(f.z)};
}

Mat decode(const Model& m, const Embedding& embedding) {
    if (embedding.values.size() != m.config.bottleneck_dim)
        throw std::invalid_argument("decode: embedding size mismatch");
    const std::size_t S = m.config.embed_dim;
    std::vector<double> pre = affine(m.dec_w1, embedding.values, m.dec_b1);
    for (double& h : pre)
        h = std::max(h, 0.0);
    std::vector<double> u = affine(m.dec_w2, pre, m.dec_b2);
    Mat recon(S, S);
    for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < S; ++j)
            recon(i, j) = m.bc_gain(i, j) * u[j] + m.bc_bias(i, j);
    return recon;
}

double reconstruction_loss(const Model& m, const Mat& input) {
    check_input(m, input);
    Forward f;
    full_forward(m, input, f);
    return mse(f.recon, input);
}

TrainResult train(const Model& model, const CorrSequence& sequence,
                  const ModelConfig& config) {
    validate_config(config);
    if (sequence.matrices.empty())
        throw std::invalid_argument("train: empty sequence");

    TrainResult result;
    result.model = model;
    Model& m = result.model;

    Grads grads(m);
    Grads velocity(m);

    // model, gradient and velocity tensors walked in lockstep
    std::vector<std::pair<double*, std::size_t>> mt, gt, vt;
    for_each_tensor(m, [&](const char*, double* p, std::size_t n) { mt.push_back({p, n}); });
    for_each_tensor(grads.g,
                    [&](const char*, double* p, std::size_t n) { gt.push_back({p, n}); });
    for_each_tensor(velocity.g,
                    [&](const char*, double* p, std::size_t n) { vt.push_back({p, n}); });

    std::vector<std::size_t> order(sequence.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    Rng shuffle_rng(derive_seed(config.seed, 1));

    const double lr = config.learning_rate;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t done = 0;
        while (done < order.size()) {
            std::size_t bsz = std::min(config.batch_size, order.size() - done);
            grads.zero();
            double batch_loss = 0.0;
            for (std::size_t b = 0; b < bsz; ++b) {
                const Mat& x = sequence.matrices[order[done + b]].padded;
                Forward f;
                full_forward(m, x, f);
                batch_loss += mse(f.recon, x);
                backward(m, x, f, grads.g);
            }
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("training diverged at epoch " +
                                         std::to_string(epoch + 1));
            epoch_loss += batch_loss;

            double inv_b = 1.0 / static_cast<double>(bsz);
            for (std::size_t t = 0; t < mt.size(); ++t) {
                for (std::size_t i = 0; i < mt[t].second; ++i) {
                    vt[t].first[i] =
                        kMomentum * vt[t].first[i] - lr * gt[t].first[i] * inv_b;
                    mt[t].first[i] += vt[t].first[i];
                }
            }
            done += bsz;
        }
        result.loss_trace.push_back(epoch_loss / static_cast<double>(order.size()));
    }
    return result;
}

double gradient_check(const Model& model, const Mat& input,
                      std::size_t samples_per_tensor, std::uint64_t sample_seed) {
    check_input(model, input);
    Model work = model;
    Grads analytic(work);
    {
        Forward f;
        full_forward(work, input, f);
        backward(work, input, f, analytic.g);
    }

    struct TensorRef {
        double* param;
        double* grad;
        std::size_t n;
    };
    std::vector<TensorRef> tensors;
    {
        std::vector<std::pair<double*, std::size_t>> mt, gt;
        for_each_tensor(work, [&](const char*, double* p, std::size_t n) {
            mt.push_back({p, n});
        });
        for_each_tensor(analytic.g, [&](const char*, double* p, std::size_t n) {
            gt.push_back({p, n});
        });
        for (std::size_t t = 0; t < mt.size(); ++t)
            tensors.push_back({mt[t].first, gt[t].first, mt[t].second});
    }

    const double h = 1e-5;
    Rng rng(sample_seed);
    double worst = 0.0;
    for (const auto& t : tensors) {
        for (std::size_t s = 0; s < std::max<std::size_t>(samples_per_tensor, 1); ++s) {
            std::size_t idx = rng.index(t.n);
            double saved = t.param[idx];
            t.param[idx] = saved + h;
            double up = reconstruction_loss(work, input);
            t.param[idx] = saved - h;
            double down = reconstruction_loss(work, input);
            t.param[idx] = saved;
            double numeric = (up - down) / (2.0 * h);
            double ga = t.grad[idx];
            double err = std::abs(ga - numeric) /
                         std::max({std::abs(ga), std::abs(numeric), 1e-8});
            worst = std::max(worst, err);
        }
    }
    return worst;
}

std::vector<Embedding> embed_sequence(const Model& model, const CorrSequence& sequence) {
    std::vector<Embedding> out;
    out.reserve(sequence.size());
    for (const auto& cm : sequence.matrices) {
        Embedding e = encode(model, cm.padded);
        e.window_end = cm.window_end;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Mat> attention_weight_maps(const Model& model, const CorrSequence& sequence,
                                       std::size_t window_end) {
    for (const auto& cm : sequence.matrices) {
        if (cm.window_end == window_end)
            return multi_head_attention(model, cm.padded).weights;
    }
    throw std::runtime_error("window_end " + std::to_string(window_end) +
                             " not present in sequence");
}

std::vector<std::string> export_attention_weights(const Model& model,
                                                  const CorrSequence& sequence,
                                                  std::size_t window_end,
                                                  const std::string& dir,
                                                  const std::string& prefix) {
    auto maps = attention_weight_maps(model, sequence, window_end);
    std::vector<std::string> paths;
    for (std::size_t h = 0; h < maps.size(); ++h) {
        std::string path = dir + "/" + prefix + "_head" + std::to_string(h) + ".csv";
        write_corr_csv(maps[h], path);
        paths.push_back(path);
    }
    return paths;
}

namespace {

constexpr char kMagic[8] = {'D', 'S', 'U', 'P', 'P', 'M', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& f, std::uint32_t v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ofstream& f, std::uint64_t v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ofstream& f, double v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t get_u32(std::ifstream& f) {
    std::uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
std::uint64_t get_u64(std::ifstream& f) {
    std::uint64_t v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
double get_f64(std::ifstream& f) {
    double v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f.is_open())
        throw std::runtime_error("cannot write '" + path + "'");
    f.write(kMagic, sizeof kMagic);
    put_u32(f, kVersion);
    put_u32(f, static_cast<std::uint32_t>(model.config.heads));
    put_u32(f, static_cast<std::uint32_t>(model.config.embed_dim));
    put_u32(f, static_cast<std::uint32_t>(model.config.bottleneck_dim));
    put_u32(f, static_cast<std::uint32_t>(model.config.hidden_dim));
    put_u64(f, model.config.seed);
    put_f64(f, model.config.learning_rate);
    put_u32(f, static_cast<std::uint32_t>(model.config.epochs));
    put_u32(f, static_cast<std::uint32_t>(model.config.batch_size));

    Model& m = const_cast<Model&>(model);
    std::uint64_t count = 0;
    for_each_tensor(m, [&](const char*, double*, std::size_t) { ++count; });
    put_u64(f, count);
    for_each_tensor(m, [&](const char*, double* p, std::size_t n) {
        put_u64(f, n);
        f.write(reinterpret_cast<const char*>(p),
                static_cast<std::streamsize>(n * sizeof(double)));
    });
    if (!f.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

Model load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f.is_open())
        throw std::runtime_error("cannot open '" + path + "'");
    char magic[8];
    f.read(magic, sizeof magic);
    if (!f.good() || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("'" + path + "' is not a model checkpoint");
    if (get_u32(f) != kVersion)
        throw std::runtime_error("'" + path + "': unsupported checkpoint version");

    ModelConfig c;
    c.heads = get_u32(f);
    c.embed_dim = get_u32(f);
    c.bottleneck_dim = get_u32(f);
    c.hidden_dim = get_u32(f);
    c.seed = get_u64(f);
    c.learning_rate = get_f64(f);
    c.epochs = get_u32(f);
    c.batch_size = get_u32(f);

    Model m = init_model(c);
    std::uint64_t count = get_u64(f);
    std::uint64_t seen = 0;
    bool ok = true;
    for_each_tensor(m, [&](const char*, double* p, std::size_t n) {
        ++seen;
        std::uint64_t stored = get_u64(f);
        if (stored != n) {
            ok = false;
            return;
        }
        f.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    });
    if (!ok || seen != count || !f.good())
        throw std::runtime_error("'" + path + "': corrupt checkpoint");
    return m;
}

}  // namespace deepsupp
