#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chaoslab {

enum class Activation { Sigmoid, Identity };

// f(x) = 1/(1+e^-x); returns the value and the derivative f(1-f).
std::pair<double, double> sigmoid(double x);

// Fully connected feedforward net. Hidden layers are always sigmoid; the
// output layer is sigmoid or identity. The bias of each unit is stored
// separately and acts as a weight on a constant input of 1.
//
// weights[l] has layer_sizes[l+1] x layer_sizes[l] entries, row-major by
// output unit; biases[l] has layer_sizes[l+1] entries.
struct MLP {
    std::vector<int> layer_sizes;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    Activation output_activation = Activation::Sigmoid;

    std::size_t n_layers() const { return layer_sizes.size(); }
    std::size_t n_parameters() const;
    void check_shapes() const;  // throws ConfigError on mismatch
};

struct TrainConfig {
    double learning_rate = 0.5;
    std::int64_t epochs = 1000;
    std::uint64_t seed = 1;
    double init_range = 0.5;  // weights drawn uniform(-init_range, +init_range)
};

// Uniform(-a, a) initialization from the seeded generator; same seed, same net.
MLP init_weights(const std::vector<int>& layer_sizes, const TrainConfig& config,
                 Activation output_activation = Activation::Sigmoid);

// Forward pass retaining every layer's output (activations[0] is the input),
// which is exactly what backprop needs; pre-activations are recoverable from
// the stored outputs since the sigmoid derivative is y(1-y).
struct ForwardTrace {
    std::vector<std::vector<double>> activations;
    const std::vector<double>& output() const { return activations.back(); }
};

ForwardTrace forward(const MLP& net, std::span<const double> input);

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

// Reverse-mode gradients of the loss whose derivative w.r.t. the network
// output is `output_error_signal` (for L = 1/2 ||y - y_d||^2 pass y - y_d).
Gradients backprop_grad(const MLP& net, std::span<const double> input,
                        std::span<const double> output_error_signal);
Gradients backprop_grad(const MLP& net, const ForwardTrace& trace,
                        std::span<const double> output_error_signal);

// p <- p - learning_rate * grad(p) for every parameter.
MLP sgd_update(MLP net, const Gradients& grads, double learning_rate);

using Dataset = std::vector<std::pair<std::vector<double>, std::vector<double>>>;

// Per-sample loss 1/2 ||y - target||^2.
double sample_loss(const MLP& net, std::span<const double> input,
                   std::span<const double> target);

struct TrainResult {
    MLP net;
    std::vector<double> loss_series;  // mean per-sample loss after each epoch
};

// Plain SGD, one update per sample in dataset order (no shuffling), `epochs`
// passes. Deterministic for a given config. Non-finite loss throws
// TrainingDivergenceError naming the epoch.
TrainResult train_supervised(MLP net, const Dataset& dataset, const TrainConfig& config);

struct GradientCheckReport {
    double max_relative_error = 0.0;
    std::vector<double> per_parameter_errors;
};

// Central-difference check of backprop_grad over every parameter for the
// squared-error loss against `target`. eps must lie in [1e-7, 1e-3].
GradientCheckReport gradient_check(const MLP& net, std::span<const double> input,
                                   std::span<const double> target, double eps);

// Text format: one header line "<size0> <size1> ... <sizeN> <sigmoid|identity>",
// then one parameter per line (17 significant digits, bit round-trippable),
// layer by layer, weights row-major then biases.
void save_mlp(const MLP& net, const std::filesystem::path& path);
MLP load_mlp(const std::filesystem::path& path);
std::string mlp_to_string(const MLP& net);
MLP mlp_from_string(const std::string& text);

}  // namespace chaoslab
