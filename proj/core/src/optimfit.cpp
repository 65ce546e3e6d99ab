// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/optimfit.hpp"

#include <cmath>
#include <functional>

#include "vesselmip/errors.hpp"

namespace vesselmip {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> w(std::size_t(2 * radius + 1));
    double sum = 0;
    for (int k = -radius; k <= radius; ++k) {
        const double v = std::exp(-double(k) * double(k) / (2.0 * sigma * sigma));
        w[std::size_t(k + radius)] = v;
        sum += v;
    }
    for (double& v : w) {
        v /= sum;
    }
    return w;
}

// Half-sample reflection: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
int fold(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

// One separable pass along `axis_stride` over lines of length n.
void convolve_axis(std::vector<double>& data, const Dims& d, int axis,
                   const std::vector<double>& w) {
    const int radius = int(w.size() / 2);
    const std::size_t sx = 1, sy = std::size_t(d.x), sz = std::size_t(d.x) * std::size_t(d.y);
    std::size_t stride, n_lines_a, n_lines_b, stride_a, stride_b;
    int n;
    if (axis == 0) {
        stride = sx; n = d.x;
        n_lines_a = std::size_t(d.y); stride_a = sy;
        n_lines_b = std::size_t(d.z); stride_b = sz;
    } else if (axis == 1) {
        stride = sy; n = d.y;
        n_lines_a = std::size_t(d.x); stride_a = sx;
        n_lines_b = std::size_t(d.z); stride_b = sz;
    } else {
        stride = sz; n = d.z;
        n_lines_a = std::size_t(d.x); stride_a = sx;
        n_lines_b = std::size_t(d.y); stride_b = sy;
    }
    const std::size_t un = std::size_t(n);
    std::vector<double> line(un);
    for (std::size_t b = 0; b < n_lines_b; ++b) {
        for (std::size_t a = 0; a < n_lines_a; ++a) {
            const std::size_t base = a * stride_a + b * stride_b;
            for (int i = 0; i < n; ++i) {
                line[std::size_t(i)] = data[base + stride * std::size_t(i)];
            }
            for (int i = 0; i < n; ++i) {
                double acc = 0;
                for (int k = -radius; k <= radius; ++k) {
                    acc += w[std::size_t(k + radius)] * line[std::size_t(fold(i + k, n))];
                }
                data[base + stride * std::size_t(i)] = acc;
            }
        }
    }
}

void smooth_inplace(std::vector<double>& data, const Dims& d, double sigma) {
    if (sigma <= 0) {
        return;
    }
    const std::vector<double> w = gaussian_kernel(sigma);
    convolve_axis(data, d, 0, w);
    convolve_axis(data, d, 1, w);
    convolve_axis(data, d, 2, w);
}

FitResult run_fit(const Dims& dims, const FitConfig& cfg, const Volume* guidance,
                  const std::function<LossValue(const Volume&)>& loss_fn) {
    const std::size_t n = dims.count();
    std::vector<double> theta(n, cfg.init_logit);
    if (guidance != nullptr && cfg.init_scale != 0.0) {
        if (guidance->dims() != dims) {
            throw DimsMismatchError("fit: guidance dims differ from target dims");
        }
        for (std::size_t i = 0; i < n; ++i) {
            theta[i] += cfg.init_scale * double((*guidance)[i]);
        }
    }
    std::vector<double> m(n, 0.0), v(n, 0.0), g(n), s;
    Volume y(dims);

    FitResult out;
    out.trace.reserve(std::size_t(cfg.steps));

    auto forward = [&]() {
        if (cfg.smoothing_sigma > 0) {
            s = theta;
            smooth_inplace(s, dims, cfg.smoothing_sigma);
        }
        const std::vector<double>& logits = cfg.smoothing_sigma > 0 ? s : theta;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = float(1.0 / (1.0 + std::exp(-logits[i])));
        }
    };

    for (int step = 0; step < cfg.steps; ++step) {
        forward();
        LossValue lv = loss_fn(y);
        out.trace.push_back({step, lv.total, lv.term_2d, lv.term_depth});
        if (!std::isfinite(lv.total)) {
            throw DivergenceError("non-finite loss at step " + std::to_string(step), step);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double yi = double(y[i]);
            g[i] = double(lv.gradient[i]) * yi * (1.0 - yi);
        }
        if (cfg.smoothing_sigma > 0) {
            smooth_inplace(g, dims, cfg.smoothing_sigma);  // kernel is self-adjoint
        }
        const double t = double(step + 1);
        const double bc1 = 1.0 - std::pow(cfg.beta1, t);
        const double bc2 = 1.0 - std::pow(cfg.beta2, t);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double mh = m[i] / bc1;
            const double vh = v[i] / bc2;
            theta[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.adam_eps);
        }
    }

    forward();
    out.probability = y;
    out.prediction = Mask3D(dims, 0);
    for (std::size_t i = 0; i < n; ++i) {
        out.prediction[i] = double(y[i]) >= cfg.binarize_threshold ? 1 : 0;
    }
    return out;
}

}  // namespace

Volume smooth(const Volume& v, double sigma) {
    if (sigma <= 0) {
        return v;
    }
    std::vector<double> data(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        data[i] = double(v[i]);
    }
    smooth_inplace(data, v.dims(), sigma);
    Volume out(v.dims());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = float(data[i]);
    }
    return out;
}

FitResult fit(const Volume& guidance, const SupervisionBundle& bundle, const FitConfig& cfg) {
    return run_fit(guidance.dims(), cfg, &guidance,
                   [&](const Volume& y) { return loss(y, bundle); });
}

FitResult fit_full3d(const Mask3D& gt, const FitConfig& cfg) {
    return run_fit(gt.dims(), cfg, nullptr,
                   [&](const Volume& y) { return loss_full3d(y, gt); });
}

}  // namespace vesselmip
