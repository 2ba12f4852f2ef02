#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "femu/errors.hpp"
#include "femu/kernels.hpp"
#include "femu/surrogate.hpp"

namespace femu {

Mlp::Mlp(int inputs, int hidden) : inputs_(inputs), hidden_(hidden) {
    if (inputs < 1 || hidden < 1) throw std::invalid_argument("mlp: layer sizes must be >= 1");
    params_.assign(w1_size() + 2 * hid() + 1, 0.0);
}

Mlp Mlp::initialized(int inputs, int hidden, std::uint64_t seed) {
    Mlp net(inputs, hidden);
    Rng rng = make_rng(seed);
    const double r1 = 1.0 / std::sqrt(static_cast<double>(inputs));
    const double r2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    std::uniform_real_distribution<double> first(-r1, r1);
    std::uniform_real_distribution<double> second(-r2, r2);
    const std::size_t first_layer = net.w1_size() + net.hid();
    for (std::size_t i = 0; i < net.params_.size(); ++i)
        net.params_[i] = i < first_layer ? first(rng) : second(rng);
    return net;
}

double Mlp::forward(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(inputs_))
        throw std::invalid_argument("mlp: input dimension mismatch");
    double h[64];
    std::vector<double> heap;
    double* hp = h;
    if (hid() > std::size(h)) {
        heap.resize(hid());
        hp = heap.data();
    }
    std::span<double> hidden_out(hp, hid());
    kernels::affine(w1(), b1(), x, hidden_out);
    for (double& v : hidden_out) v = std::tanh(v);
    return kernels::dot(w2(), hidden_out) + b2();
}

Mlp::Gradient Mlp::gradient(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(inputs_))
        throw std::invalid_argument("mlp: input dimension mismatch");
    Gradient g;
    g.parameters.assign(params_.size(), 0.0);
    g.input.assign(x.size(), 0.0);

    std::vector<double> h(hid());
    kernels::affine(w1(), b1(), x, h);
    for (double& v : h) v = std::tanh(v);
    g.output = kernels::dot(w2(), h) + b2();

    const auto n_in = static_cast<std::size_t>(inputs_);
    const auto w2v = w2();
    const auto w1v = w1();
    double* dw1 = g.parameters.data();
    double* db1 = dw1 + w1_size();
    double* dw2 = db1 + hid();
    for (std::size_t k = 0; k < hid(); ++k) {
        const double delta = w2v[k] * (1.0 - h[k] * h[k]);
        db1[k] = delta;
        dw2[k] = h[k];
        std::span<double> row(dw1 + k * n_in, n_in);
        kernels::axpy(delta, x, row);
        kernels::axpy(delta, w1v.subspan(k * n_in, n_in), g.input);
    }
    g.parameters.back() = 1.0;
    return g;
}

double mlp_loss(const Mlp& net, const TrainingSet& data) {
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = net.forward(data.inputs[i]) - data.targets[i];
        loss += r * r;
    }
    return loss;
}

double mlp_loss_gradient(const Mlp& net, const TrainingSet& data, std::span<double> gradient) {
    if (gradient.size() != net.parameter_count())
        throw std::invalid_argument("mlp: gradient buffer size mismatch");
    std::fill(gradient.begin(), gradient.end(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto g = net.gradient(data.inputs[i]);
        const double r = g.output - data.targets[i];
        loss += r * r;
        kernels::axpy(2.0 * r, g.parameters, gradient);
    }
    return loss;
}

TrainResult mlp_train(Mlp net, const TrainingSet& data, int cycles) {
    if (data.size() == 0) throw std::invalid_argument("mlp_train: empty training set");
    if (data.inputs.size() != data.targets.size())
        throw std::invalid_argument("mlp_train: inputs/targets length mismatch");

    const std::size_t n = net.parameter_count();
    std::vector<double> x(net.parameters().begin(), net.parameters().end());

    Mlp probe = net;
    auto set = [&](std::span<const double> p) {
        std::copy(p.begin(), p.end(), probe.parameters().begin());
    };
    auto loss_at = [&](std::span<const double> p) {
        set(p);
        return mlp_loss(probe, data);
    };
    auto grad_at = [&](std::span<const double> p, std::span<double> g) {
        set(p);
        return mlp_loss_gradient(probe, data, g);
    };
    auto dotp = [](std::span<const double> a, std::span<const double> b) { return kernels::dot(a, b); };

    TrainResult result{net, 0.0, 0.0, 0};
    std::vector<double> grad_new(n), grad_old(n), grad_plus(n), d(n), x_plus(n), x_new(n);
    double f_old = grad_at(x, grad_new);
    if (!std::isfinite(f_old)) throw OptimizerError("mlp_train: non-finite initial loss");
    result.initial_loss = f_old;
    grad_old = grad_new;
    for (std::size_t i = 0; i < n; ++i) d[i] = -grad_new[i];

    constexpr double sigma0 = 1e-4;
    constexpr double beta_min = 1e-15;
    constexpr double beta_max = 1e100;
    double beta = 1.0;
    double mu = 0.0, kappa = 0.0, theta = 0.0;
    bool success = true;
    std::size_t n_success = 0;

    for (int j = 1; j <= cycles; ++j) {
        result.iterations = j;
        if (success) {
            mu = dotp(d, grad_new);
            if (mu >= 0.0) {
                for (std::size_t i = 0; i < n; ++i) d[i] = -grad_new[i];
                mu = dotp(d, grad_new);
            }
            kappa = dotp(d, d);
            if (kappa < 1e-300) break;  // zero gradient: converged
            const double sigma = sigma0 / std::sqrt(kappa);
            for (std::size_t i = 0; i < n; ++i) x_plus[i] = x[i] + sigma * d[i];
            grad_at(x_plus, grad_plus);
            double num = 0.0;
            for (std::size_t i = 0; i < n; ++i) num += d[i] * (grad_plus[i] - grad_new[i]);
            theta = num / sigma;
        }

        // Scale the curvature estimate until it is positive.
        double delta = theta + beta * kappa;
        if (delta <= 0.0) {
            delta = beta * kappa;
            beta = beta - theta / kappa;
        }
        const double alpha = -mu / delta;
        for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + alpha * d[i];
        const double f_new = loss_at(x_new);
        if (!std::isfinite(f_new)) throw OptimizerError("mlp_train: non-finite loss");

        const double comparison = 2.0 * (f_new - f_old) / (alpha * mu);
        if (comparison >= 0.0 && f_new <= f_old) {
            success = true;
            ++n_success;
            x = x_new;
            f_old = f_new;
            grad_old = grad_new;
            grad_at(x, grad_new);
            if (dotp(grad_new, grad_new) == 0.0) break;
        } else {
            success = false;
        }

        if (comparison < 0.25) beta = std::min(4.0 * beta, beta_max);
        if (comparison > 0.75) beta = std::max(0.5 * beta, beta_min);

        if (n_success == n) {
            for (std::size_t i = 0; i < n; ++i) d[i] = -grad_new[i];
            n_success = 0;
        } else if (success) {
            double num = 0.0;
            for (std::size_t i = 0; i < n; ++i) num += (grad_old[i] - grad_new[i]) * grad_new[i];
            const double gamma = num / mu;
            for (std::size_t i = 0; i < n; ++i) d[i] = gamma * d[i] - grad_new[i];
        }
    }

    std::copy(x.begin(), x.end(), result.net.parameters().begin());
    result.loss = f_old;
    return result;
}

}  // namespace femu
